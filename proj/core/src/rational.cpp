#include "iadof/rational.hpp"

#include <limits>
#include <ostream>
#include <stdexcept>

namespace iadof {

namespace {

[[noreturn]] void undefined(const char* what) {
  throw std::domain_error(std::string("Rat: undefined operation ") + what);
}

BigInt parse_int(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("Rat: empty integer");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("Rat: bad integer");
  for (std::size_t j = i; j < s.size(); ++j) {
    if (s[j] < '0' || s[j] > '9') {
      throw std::invalid_argument("Rat: bad integer '" + std::string(s) + "'");
    }
  }
  return BigInt(std::string(s));
}

}  // namespace

Rat::Rat(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("Rat: zero denominator");
  // cpp_rational rejects a negative denominator
  v_ = den < 0 ? BigRat(-num, -den) : BigRat(num, den);
}

Rat Rat::infinity() {
  Rat r;
  r.inf_ = true;
  return r;
}

Rat Rat::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text == "inf" || text == "+inf") return infinity();
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rat(parse_int(text), BigInt(1));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("Rat: zero denominator");
  return Rat(parse_int(text.substr(0, slash)), den);
}

bool Rat::is_integer() const {
  return !inf_ && boost::multiprecision::denominator(v_) == 1;
}

int Rat::sign() const {
  if (inf_) return 1;
  return v_ < 0 ? -1 : (v_ > 0 ? 1 : 0);
}

BigInt Rat::numerator() const {
  if (inf_) undefined("numerator(inf)");
  return boost::multiprecision::numerator(v_);
}

BigInt Rat::denominator() const {
  if (inf_) undefined("denominator(inf)");
  return boost::multiprecision::denominator(v_);
}

const BigRat& Rat::value() const {
  if (inf_) undefined("value(inf)");
  return v_;
}

double Rat::to_double() const {
  if (inf_) return std::numeric_limits<double>::infinity();
  return v_.convert_to<double>();
}

std::string Rat::str() const {
  if (inf_) return "inf";
  return boost::multiprecision::numerator(v_).str() + "/" +
         boost::multiprecision::denominator(v_).str();
}

Rat Rat::reciprocal() const { return Rat(1) / *this; }

Rat& Rat::operator+=(const Rat& o) {
  if (inf_ || o.inf_) {
    *this = infinity();
    return *this;
  }
  v_ += o.v_;
  return *this;
}

Rat& Rat::operator-=(const Rat& o) {
  if (o.inf_) undefined("x - inf");
  if (!inf_) v_ -= o.v_;
  return *this;
}

Rat& Rat::operator*=(const Rat& o) {
  if (inf_ || o.inf_) {
    const Rat& other = inf_ ? o : *this;
    if (other.sign() <= 0) undefined("inf * non-positive");
    *this = infinity();
    return *this;
  }
  v_ *= o.v_;
  return *this;
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.inf_) {
    if (inf_) undefined("inf / inf");
    v_ = 0;
    return *this;
  }
  if (o.v_ == 0) {
    if (sign() <= 0) undefined("non-positive / 0");
    *this = infinity();
    return *this;
  }
  if (inf_) {
    if (o.v_ < 0) undefined("inf / negative");
    return *this;
  }
  v_ /= o.v_;
  return *this;
}

Rat Rat::operator-() const {
  if (inf_) undefined("-inf");
  return Rat(BigRat(-v_));
}

bool operator==(const Rat& a, const Rat& b) {
  if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
  return a.v_ == b.v_;
}

std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
  if (a.inf_ || b.inf_) {
    if (a.inf_ == b.inf_) return std::strong_ordering::equal;
    return a.inf_ ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  if (a.v_ < b.v_) return std::strong_ordering::less;
  if (a.v_ > b.v_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rat min(const Rat& a, const Rat& b) { return b < a ? b : a; }
Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }
Rat positive_part(const Rat& x) { return x.sign() > 0 ? x : Rat(0); }

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace iadof
