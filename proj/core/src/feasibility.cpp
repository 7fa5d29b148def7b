#include "iadof/feasibility.hpp"

#include "iadof/alignment.hpp"
#include "iadof/errors.hpp"

#include <stdexcept>

namespace iadof {

namespace {

void check_d(const Rat& d) {
  if (d.is_infinite() || d.sign() <= 0) throw std::invalid_argument("d must be a positive finite rational");
}

// Tightest pair over both sides, indices 0..last; also whether any pair is violated.
struct PairScan {
  std::optional<BindingPair> tightest;
  bool violated = false;
};

PairScan scan_pairs(const SystemConfig& cfg, const Rat& d, int last) {
  PairScan out;
  const BigInt M(cfg.M), N(cfg.N), K(cfg.K);
  const BigInt dn = d.numerator(), dd = d.denominator();
  // Best bound so far as best_lhs / best_w; compared by cross-multiplying.
  const PQPair* best = nullptr;
  Side best_side = Side::A;
  BigInt best_lhs, best_w;
  std::vector<PQPair> seqs[2] = {pq_sequence(cfg.G, cfg.K, Side::A, last), pq_sequence(cfg.G, cfg.K, Side::B, last)};
  for (int s = 0; s < 2; ++s) {
    for (std::size_t i = 1; i < seqs[s].size(); ++i) {
      const auto& x = seqs[s][i];
      const BigInt pm = x.p * M, qn = x.q * N;
      BigInt lhs = pm > qn ? pm : qn;
      BigInt w = x.p * K + x.q;
      if (lhs * dd < dn * w) out.violated = true;
      if (!best || lhs * best_w < best_lhs * w) {
        best = &x;
        best_side = s == 0 ? Side::A : Side::B;
        best_lhs = std::move(lhs);
        best_w = std::move(w);
      }
    }
  }
  if (best) out.tightest = BindingPair{best_side, best->n, best->p, best->q, Rat(best_lhs, best_w)};
  return out;
}

}  // namespace

std::string to_string(LinearVerdict v) {
  switch (v) {
    case LinearVerdict::Feasible: return "feasible";
    case LinearVerdict::Infeasible: return "infeasible";
    case LinearVerdict::ConjecturedFeasible: return "conjectured-feasible";
  }
  return "?";
}

std::string to_string(AsymptoticVerdict v) {
  return v == AsymptoticVerdict::Feasible ? "feasible" : "infeasible";
}

FeasibilityVerdict feasible_linear(const SystemConfig& cfg, const Rat& d, const FeasibilityOptions& opt) {
  check_d(d);
  FeasibilityVerdict v;
  v.region = classify_region(cfg);
  v.proper_holds = Rat(cfg.M + cfg.N) >= Rat(cfg.G * cfg.K + 1) * d;
  if (!v.region.region_two()) {
    v.linear = v.proper_holds ? LinearVerdict::ConjecturedFeasible : LinearVerdict::Infeasible;
    v.asymptotic = feasible_asymptotic(cfg, d);
    return v;
  }
  bool ok = false;
  PairScan scan;
  if (v.region.limit_point) {
    ok = d <= dof_decomposition(cfg);
    if (!ok) scan = scan_pairs(cfg, d, opt.max_pairs);
  } else {
    const int last = opt.check_all_pairs ? opt.max_pairs : *v.region.n + 1;
    scan = scan_pairs(cfg, d, last);
    ok = !scan.violated;
  }
  v.linear = ok ? LinearVerdict::Feasible : LinearVerdict::Infeasible;
  v.asymptotic = ok ? AsymptoticVerdict::Feasible : AsymptoticVerdict::Infeasible;
  if (!ok) v.binding_pair = scan.tightest;
  return v;
}

AsymptoticVerdict feasible_asymptotic(const SystemConfig& cfg, const Rat& d) {
  check_d(d);
  const RegionClass rc = classify_region(cfg);
  if (rc.region_two()) {
    return feasible_linear(cfg, d).asymptotic;
  }
  const Rat lhs(BigInt(cfg.M) * cfg.N);
  return lhs >= Rat(cfg.M + cfg.K * cfg.N) * d ? AsymptoticVerdict::Feasible
                                               : AsymptoticVerdict::Infeasible;
}

std::int64_t min_spatial_extension(const SystemConfig& cfg) {
  const AlignmentPlan plan = alignment_plan(cfg);
  const BigInt m = boost::multiprecision::lcm(plan.d.denominator(), plan.columns.denominator());
  return m.convert_to<std::int64_t>();
}

}  // namespace iadof
