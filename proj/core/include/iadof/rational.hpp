#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace iadof {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Exact rational with a single +infinity value. Finite values are kept in
// lowest terms with a positive denominator (cpp_rational normalizes).
class Rat {
 public:
  Rat() = default;
  Rat(long long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rat(const BigInt& num, const BigInt& den);
  explicit Rat(const BigRat& v) : v_(v) {}

  static Rat infinity();
  // Accepts "p", "p/q", "inf". Throws std::invalid_argument.
  static Rat parse(std::string_view text);

  bool is_infinite() const { return inf_; }
  bool is_zero() const { return !inf_ && v_ == 0; }
  bool is_integer() const;
  int sign() const;

  BigInt numerator() const;
  BigInt denominator() const;
  const BigRat& value() const;

  double to_double() const;
  // "num/den" (integers too, e.g. "3/1"); "inf" for infinity.
  std::string str() const;

  Rat reciprocal() const;

  Rat& operator+=(const Rat& o);
  Rat& operator-=(const Rat& o);
  Rat& operator*=(const Rat& o);
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  Rat operator-() const;

  friend bool operator==(const Rat& a, const Rat& b);
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b);

 private:
  BigRat v_{0};
  bool inf_ = false;
};

Rat min(const Rat& a, const Rat& b);
Rat max(const Rat& a, const Rat& b);
// (x)^+ = max(x, 0)
Rat positive_part(const Rat& x);

std::ostream& operator<<(std::ostream& os, const Rat& r);

}  // namespace iadof
