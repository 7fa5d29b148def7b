#include "iadof/dof_bounds.hpp"

#include <stdexcept>

namespace iadof {

namespace {

// Sign of M^2 - (G-1)KMN + KN^2; negative exactly inside Region I.
int region_quadratic_sign(const SystemConfig& c) {
  const BigInt M(c.M), N(c.N);
  const BigInt q = M * M - BigInt((c.G - 1) * c.K) * M * N + BigInt(c.K) * N * N;
  return q < 0 ? -1 : (q > 0 ? 1 : 0);
}

// Region index n on one side, or 0 when M/N is not bracketed there. Walks the
// (p, q) pairs and compares M p against q N, so C_n = q/p is never normalized.
int scan_side(const SystemConfig& cfg, Side side) {
  const BigInt M(cfg.M), N(cfg.N);
  // r < C (C infinite when p == 0), and r <= C
  auto below = [&](const BigInt& p, const BigInt& q) { return p == 0 || M * p < q * N; };
  auto at_most = [&](const BigInt& p, const BigInt& q) { return p == 0 || M * p <= q * N; };
  BigInt p0 = side == Side::A ? -1 : 0, q0 = side == Side::A ? 0 : -1;
  BigInt p1 = side == Side::A ? 0 : 1, q1 = side == Side::A ? 1 : 0;
  for (int n = 1; n < (1 << 16); ++n) {
    const std::int64_t a = (cfg.G - 1) * kbar(cfg.K, side == Side::A ? n - 1 : n);
    BigInt p2 = a * p1 - p0, q2 = a * q1 - q0;
    if (p2 < 0 || q2 < 0) return 0;
    if (side == Side::A ? (!below(p2, q2) && below(p1, q1)) : (!at_most(p1, q1) && at_most(p2, q2))) return n;
    p0 = std::move(p1);
    q0 = std::move(q1);
    p1 = std::move(p2);
    q1 = std::move(q2);
  }
  throw std::logic_error("classify_region: scan did not terminate");
}

}  // namespace

void SystemConfig::validate() const {
  if (G < 2) throw std::invalid_argument("G must be >= 2");
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  if (M < 1) throw std::invalid_argument("M must be >= 1");
  if (N < 1) throw std::invalid_argument("N must be >= 1");
}

SystemConfig SystemConfig::extended(std::int64_t m) const {
  if (m < 1) throw std::invalid_argument("extension factor must be >= 1");
  return {G, K, M * m, N * m};
}

std::string to_string(Region r) {
  switch (r) {
    case Region::I: return "I";
    case Region::IIA: return "II-A";
    case Region::IIB: return "II-B";
  }
  return "?";
}

std::string to_string(Subcase s) { return s == Subcase::MLimited ? "M-limited" : "N-limited"; }

std::string to_string(Achievability a) {
  return a == Achievability::Linear ? "linear" : "asymptotic-only";
}

std::string RegionClass::label() const {
  if (region == Region::I) return "I";
  if (limit_point) return to_string(region) + "(limit)";
  return to_string(region) + "(" + std::to_string(*n) + ")";
}

Rat dof_decomposition(const SystemConfig& cfg) {
  cfg.validate();
  return Rat(BigInt(cfg.M) * cfg.N, BigInt(cfg.M) + BigInt(cfg.K) * cfg.N);
}

Rat dof_proper(const SystemConfig& cfg) {
  cfg.validate();
  return Rat(BigInt(cfg.M) + cfg.N, BigInt(cfg.G) * cfg.K + 1);
}

RegionClass classify_region(const SystemConfig& cfg) {
  cfg.validate();
  RegionClass rc;
  const int s = region_quadratic_sign(cfg);
  if (s < 0) return rc;
  if (s == 0) {
    rc.region = 2 * cfg.M >= (cfg.G - 1) * cfg.K * cfg.N ? Region::IIA : Region::IIB;
    rc.limit_point = true;
    rc.subcase = Subcase::MLimited;
    return rc;
  }
  const Rat r = cfg.ratio();
  // Outside Region I an infinite A sequence only brackets ratios above the
  // midpoint of the two limits, and the B sequence only those below it.
  const bool infinite = sequences_infinite(cfg.G, cfg.K);
  const bool upper = 2 * cfg.M > (cfg.G - 1) * cfg.K * cfg.N;
  int n = 0;
  if (!infinite || upper) n = scan_side(cfg, Side::A);
  if (n > 0) {
    rc.region = Region::IIA;
    rc.n = n;
  } else if (int nb = (!infinite || !upper) ? scan_side(cfg, Side::B) : 0; nb > 0) {
    rc.region = Region::IIB;
    rc.n = nb;
  } else {
    throw std::logic_error("classify_region: ratio not bracketed by either sequence");
  }
  const QuantityTerms t = quantity_terms(cfg, rc);
  rc.subcase = r >= t.touch ? Subcase::MLimited : Subcase::NLimited;
  return rc;
}

QuantityTerms quantity_terms(const SystemConfig& cfg, const RegionClass& rc) {
  if (!rc.region_two() || rc.limit_point || !rc.n) {
    throw std::invalid_argument("quantity_terms needs a finite-index Region II class");
  }
  const int n = *rc.n;
  const Rat k(cfg.K);
  const Rat M(cfg.M), N(cfg.N);
  const auto pq = pq_sequence(cfg.G, cfg.K, rc.side(), n);
  if (static_cast<int>(pq.size()) <= n + 1) throw std::logic_error("quantity_terms: index out of range");
  auto c_at = [&](int i) {
    const PQPair& x = pq[static_cast<std::size_t>(i + 1)];
    return x.p == 0 ? Rat::infinity() : Rat(x.q, x.p);
  };
  const Rat c[2] = {c_at(n - 1), c_at(n)};
  // A: C_n bounds M, C_{n-1} bounds N.  B: C_{n-1} bounds M, C_n bounds N.
  const Rat& cm = rc.side() == Side::A ? c[1] : c[0];
  const Rat& cn = rc.side() == Side::A ? c[0] : c[1];
  return {M / (k + cm), N / (Rat(1) + k / cn), (k + cm) / (Rat(1) + k / cn)};
}

std::optional<Rat> dof_quantity(const SystemConfig& cfg) {
  const RegionClass rc = classify_region(cfg);
  if (!rc.region_two()) return std::nullopt;
  if (rc.limit_point) return dof_decomposition(cfg);
  const QuantityTerms t = quantity_terms(cfg, rc);
  return min(t.m_term, t.n_term);
}

DoFReport dof_upper(const SystemConfig& cfg) {
  DoFReport rep;
  rep.cfg = cfg;
  rep.d_decom = dof_decomposition(cfg);
  rep.d_proper = dof_proper(cfg);
  rep.region = classify_region(cfg);
  if (!rep.region.region_two()) {
    rep.d_upper = rep.d_decom;
    rep.achievable_by = Achievability::AsymptoticOnly;
    return rep;
  }
  if (rep.region.limit_point) {
    rep.d_quantity = rep.d_decom;
  } else {
    const QuantityTerms t = quantity_terms(cfg, rep.region);
    rep.d_quantity = min(t.m_term, t.n_term);
  }
  rep.d_upper = *rep.d_quantity;
  rep.achievable_by = Achievability::Linear;
  return rep;
}

}  // namespace iadof
