#include "iadof/alignment.hpp"

#include "iadof/errors.hpp"

namespace iadof {

std::string to_string(Flow f) { return f == Flow::V ? "V" : "U"; }

std::int64_t AlignmentPlan::rows() const { return q.convert_to<std::int64_t>() * cfg.N; }
std::int64_t AlignmentPlan::cols() const { return p.convert_to<std::int64_t>() * cfg.M; }
std::int64_t AlignmentPlan::expected_rank() const { return flow == Flow::V ? rows() : cols(); }

AlignmentPlan alignment_plan(const SystemConfig& cfg) {
  AlignmentPlan plan;
  plan.cfg = cfg;
  plan.region = classify_region(cfg);
  if (!plan.region.region_two()) throw RefusedError("Region I: no finite linear IA achieves the bound");
  if (plan.region.limit_point) throw RefusedError("M/N at the sequence limit: chain does not terminate");
  plan.side = plan.region.side();
  plan.n = *plan.region.n;
  plan.flow = *plan.region.subcase == Subcase::MLimited ? Flow::V : Flow::U;
  const bool a_side = plan.side == Side::A;
  if (plan.flow == Flow::V) {
    plan.index = a_side ? plan.n : plan.n - 1;
    plan.kbar = kbar(cfg.K, plan.n);
  } else {
    plan.index = a_side ? plan.n - 1 : plan.n;
    plan.kbar = kbar(cfg.K, plan.n - 1);
  }
  const auto pq = pq_sequence(cfg.G, cfg.K, plan.side, plan.index);
  const auto& pair = pq.at(static_cast<std::size_t>(plan.index) + 1);
  plan.p = pair.p;
  plan.q = pair.q;
  plan.count = cfg.G * plan.kbar;
  const QuantityTerms t = quantity_terms(cfg, plan.region);
  plan.d = min(t.m_term, t.n_term);
  const BigInt& carrier = plan.flow == Flow::V ? plan.p : plan.q;
  plan.columns = Rat(cfg.K) * plan.d / Rat(BigInt(plan.kbar) * carrier);
  return plan;
}

}  // namespace iadof
