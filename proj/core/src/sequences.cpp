#include "iadof/sequences.hpp"

#include <cmath>
#include <stdexcept>

namespace iadof {

namespace {

void check_gk(std::int64_t G, std::int64_t K) {
  if (G < 2) throw std::invalid_argument("G must be >= 2");
  if (K < 1) throw std::invalid_argument("K must be >= 1");
}

}  // namespace

std::string to_string(Side s) { return s == Side::A ? "A" : "B"; }

std::int64_t kbar(std::int64_t K, std::int64_t n) { return n % 2 == 0 ? K : 1; }

std::vector<PQPair> pq_sequence(std::int64_t G, std::int64_t K, Side side, int n_max) {
  check_gk(G, K);
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  std::vector<PQPair> out;
  if (side == Side::A) {
    out.push_back({-1, 0, -1});
    out.push_back({0, 1, 0});
  } else {
    out.push_back({0, -1, -1});
    out.push_back({1, 0, 0});
  }
  for (int n = 1; n <= n_max; ++n) {
    const std::int64_t a = (G - 1) * (side == Side::A ? kbar(K, n - 1) : kbar(K, n));
    const PQPair& x1 = out[out.size() - 1];
    const PQPair& x2 = out[out.size() - 2];
    BigInt p = a * x1.p - x2.p;
    BigInt q = a * x1.q - x2.q;
    if (p < 0 || q < 0) break;
    out.push_back({std::move(p), std::move(q), n});
  }
  return out;
}

std::vector<Rat> c_sequence(std::int64_t G, std::int64_t K, Side side, int n_max) {
  check_gk(G, K);
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  const Rat k(K);
  const Rat g1(G - 1);
  std::vector<Rat> c;
  c.push_back(side == Side::A ? Rat::infinity() : Rat(0));
  for (int n = 1; n <= n_max; ++n) {
    const Rat& prev = c.back();
    if (side == Side::A) {
      if (prev.is_zero()) break;
      Rat next = g1 * k - k / prev;
      if (next.sign() < 0) break;
      c.push_back(std::move(next));
    } else {
      if (prev.is_infinite()) break;
      Rat den = g1 - prev / k;
      if (den.sign() < 0) break;
      c.push_back(Rat(1) / den);
    }
  }
  return c;
}

bool sequences_infinite(std::int64_t G, std::int64_t K) { return G >= 3 || K >= 4; }

double c_limit(std::int64_t G, std::int64_t K, Side side) {
  check_gk(G, K);
  if (!sequences_infinite(G, K)) {
    throw std::domain_error("C sequence is finite for G = 2, K < 4; no limit");
  }
  const double a = static_cast<double>((G - 1) * K);
  const double disc = std::sqrt(a * a - 4.0 * static_cast<double>(K));
  return side == Side::A ? (a + disc) / 2.0 : (a - disc) / 2.0;
}

Rat d_boundary(std::int64_t G, std::int64_t K, Side side, int n) {
  if (n < 0) throw std::out_of_range("d_boundary: negative index");
  auto c = c_sequence(G, K, side, n + 1);
  if (static_cast<int>(c.size()) < n + 2) {
    throw std::out_of_range("d_boundary: index beyond the produced sequence");
  }
  const Rat k(K);
  if (side == Side::A) return (k + c[n + 1]) / (Rat(1) + k / c[n]);
  return (k + c[n]) / (Rat(1) + k / c[n + 1]);
}

}  // namespace iadof
