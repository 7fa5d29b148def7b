#include "iadof/errors.hpp"
#include "iadof/synth.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <tuple>

namespace iadof {

namespace {

// Search in constraint orientation: each accepted candidate contributes b
// rows; carriers are the column slots (a columns each). V flow: carriers are
// BSs, constraints users. U flow: carriers are users, constraints BSs, and
// the blocks are adjoints of the channels.
struct Problem {
  AlignmentPlan plan;
  int G = 0, K = 0;
  int P = 0;  // carrier slots
  int Q = 0;  // constraint row blocks
  Eigen::Index a = 0, b = 0;
  Eigen::Index c = 0;
  int kb = 1;

  bool v() const { return plan.flow == Flow::V; }
  int carrier_cell(int id) const { return v() ? id : id / K; }
  int constraint_cell(int id) const { return v() ? id / K : id; }
  int carrier_pool() const { return v() ? G : G * K; }
  int constraint_pool() const { return v() ? G * K : G; }
};

struct Candidate {
  int entity = 0;
  std::vector<int> slots;
};

CMatrix block(const Problem& pr, const ChannelSet& ch, int e, int x) {
  if (pr.v()) return ch(e / pr.K, e % pr.K, x);
  return ch(x / pr.K, x % pr.K, e).adjoint();
}

CMatrix candidate_rows(const Problem& pr, const ChannelSet& ch, const std::vector<int>& carriers,
                       const Candidate& cand) {
  CMatrix R = CMatrix::Zero(pr.b, pr.P * pr.a);
  for (int s : cand.slots) R.block(0, s * pr.a, pr.b, pr.a) = block(pr, ch, cand.entity, carriers[s]);
  return R;
}

void subsets(const std::vector<int>& pool, std::size_t start, std::size_t left, std::vector<int>& cur,
             std::vector<std::vector<int>>& out) {
  if (left == 0) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i + left <= pool.size(); ++i) {
    cur.push_back(pool[i]);
    subsets(pool, i + 1, left - 1, cur, out);
    cur.pop_back();
  }
}

std::vector<Candidate> candidates(const Problem& pr, const std::vector<int>& carriers) {
  constexpr std::size_t kMaxMask = 3;
  std::vector<Candidate> out;
  for (int e = 0; e < pr.constraint_pool(); ++e) {
    std::vector<int> inter;
    for (int s = 0; s < pr.P; ++s) {
      if (pr.carrier_cell(carriers[s]) != pr.constraint_cell(e)) inter.push_back(s);
    }
    std::vector<std::vector<int>> masks;
    std::vector<int> cur;
    for (std::size_t w = 1; w <= std::min(kMaxMask, inter.size()); ++w) subsets(inter, 0, w, cur, masks);
    if (inter.size() > kMaxMask) masks.push_back(inter);
    for (auto& m : masks) out.push_back({e, std::move(m)});
  }
  return out;
}

std::vector<int> carrier_labels(const Problem& pr, int attempt, std::mt19937_64& rng) {
  const int pool = pr.carrier_pool();
  std::vector<int> carriers(static_cast<std::size_t>(pr.P));
  std::uniform_int_distribution<int> pick(0, pool - 1);
  if (attempt % 4 >= 2) {
    for (int& x : carriers) x = pick(rng);
    return carriers;
  }
  const int off = pick(rng);
  if (pr.v()) {
    for (int s = 0; s < pr.P; ++s) carriers[s] = (off + 1 + s) % pr.G;
    return carriers;
  }
  std::vector<int> order(static_cast<std::size_t>(pool));
  for (int u = 0; u < pool; ++u) order[u] = u;
  if (attempt % 4 == 1) {
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return std::pair(x % pr.K, x / pr.K) < std::pair(y % pr.K, y / pr.K); });
  }
  for (int s = 0; s < pr.P; ++s) carriers[s] = order[(off + s) % pool];
  return carriers;
}

AlignedMatrixSpec to_spec(const Problem& pr, const std::vector<int>& carriers, const std::vector<Candidate>& rows) {
  AlignedMatrixSpec spec;
  spec.side = pr.plan.flow;
  spec.expected_rank = pr.plan.expected_rank();
  spec.null_columns = pr.c;
  auto user = [&](int id) { return UserId{id / pr.K, id % pr.K}; };
  if (pr.v()) {
    for (const auto& r : rows) spec.row_blocks.push_back(user(r.entity));
    spec.col_blocks = carriers;
    spec.mask.assign(rows.size(), std::vector<bool>(carriers.size(), false));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (int s : rows[r].slots) spec.mask[r][s] = true;
    }
  } else {
    for (int x : carriers) spec.row_blocks.push_back(user(x));
    for (const auto& r : rows) spec.col_blocks.push_back(r.entity);
    spec.mask.assign(carriers.size(), std::vector<bool>(rows.size(), false));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (int s : rows[r].slots) spec.mask[s][r] = true;
    }
  }
  return spec;
}

// Cell rotation g, plus user-index rotation t when kbar = K > 1.
std::vector<AlignedMatrixSpec> orbit(const Problem& pr, const AlignedMatrixSpec& base) {
  std::vector<AlignedMatrixSpec> out;
  const int rotations = pr.K > 1 ? pr.kb : 1;
  for (int g = 0; g < pr.G; ++g) {
    for (int t = 0; t < rotations; ++t) {
      AlignedMatrixSpec s = base;
      for (auto& u : s.row_blocks) u = {(u.cell + g) % pr.G, (u.index + t) % pr.K};
      for (auto& j : s.col_blocks) j = (j + g) % pr.G;
      out.push_back(std::move(s));
    }
  }
  return out;
}

// Row space basis kept orthonormal so each candidate costs one small SVD.
class RowSpace {
 public:
  RowSpace(Eigen::Index cols, double tol) : basis_(0, cols), tol_(tol) {}

  bool try_add(const CMatrix& R) {
    CMatrix proj = R;
    if (basis_.rows() > 0) proj -= (R * basis_.adjoint()) * basis_;
    Eigen::JacobiSVD<CMatrix> svd(proj, Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double scale = R.norm();
    if (s.size() < R.rows() || scale == 0.0 || s(s.size() - 1) <= tol_ * scale) return false;
    CMatrix grown(basis_.rows() + R.rows(), basis_.cols());
    grown << basis_, svd.matrixV().leftCols(R.rows()).adjoint();
    basis_ = std::move(grown);
    return true;
  }

 private:
  CMatrix basis_;
  double tol_;
};

bool carriers_balanced(const Problem& pr, const std::vector<int>& carriers) {
  for (int k = 0; k < pr.K; ++k) {
    const auto cnt = std::count_if(carriers.begin(), carriers.end(), [&](int x) { return x % pr.K == k; });
    if (cnt * pr.K != pr.P) return false;
  }
  return true;
}

std::vector<AlignedMatrixSpec> search(const AlignmentPlan& plan, const SearchOptions& opt) {
  Problem pr;
  pr.plan = plan;
  pr.G = static_cast<int>(plan.cfg.G);
  pr.K = static_cast<int>(plan.cfg.K);
  pr.kb = static_cast<int>(plan.kbar);
  pr.c = plan.columns.numerator().convert_to<Eigen::Index>();
  const int p = plan.p.convert_to<int>(), q = plan.q.convert_to<int>();
  if (pr.v()) {
    pr.P = p;
    pr.Q = q;
    pr.a = plan.cfg.M;
    pr.b = plan.cfg.N;
  } else {
    pr.P = q;
    pr.Q = p;
    pr.a = plan.cfg.N;
    pr.b = plan.cfg.M;
  }
  const ChannelSet probe = gen_channels(plan.cfg, opt.probe_seed);
  std::mt19937_64 rng(opt.search_seed);
  const bool index_balanced = pr.kb == 1 && pr.K > 1;

  for (int attempt = 0; attempt < opt.budget; ++attempt) {
    const std::vector<int> carriers = carrier_labels(pr, attempt, rng);
    if (!pr.v() && index_balanced && !carriers_balanced(pr, carriers)) continue;

    std::vector<Candidate> cands = candidates(pr, carriers);
    auto lo = [](const Candidate& c) { return *std::min_element(c.slots.begin(), c.slots.end()); };
    auto hi = [](const Candidate& c) { return *std::max_element(c.slots.begin(), c.slots.end()); };
    if (attempt == 0) {
      // chain walk: bands ordered by their last slot
      std::stable_sort(cands.begin(), cands.end(), [&](const Candidate& x, const Candidate& y) {
        return std::tuple(hi(x), -lo(x), x.slots.size()) < std::tuple(hi(y), -lo(y), y.slots.size());
      });
    } else {
      std::shuffle(cands.begin(), cands.end(), rng);
      if (attempt % 3 == 0) {
        std::stable_sort(cands.begin(), cands.end(), [&](const Candidate& x, const Candidate& y) {
          return std::pair(lo(x), x.slots.size()) < std::pair(lo(y), y.slots.size());
        });
      }
    }

    RowSpace space(pr.P * pr.a, opt.rank_tol);
    std::vector<Candidate> rows;
    std::vector<int> per_index(static_cast<std::size_t>(pr.K), 0);
    for (const auto& cand : cands) {
      if (static_cast<int>(rows.size()) == pr.Q) break;
      if (pr.v() && index_balanced && per_index[cand.entity % pr.K] * pr.K >= pr.Q) continue;
      if (space.try_add(candidate_rows(pr, probe, carriers, cand))) {
        rows.push_back(cand);
        if (pr.v()) ++per_index[cand.entity % pr.K];
      }
    }
    if (static_cast<int>(rows.size()) != pr.Q) continue;

    CMatrix B(pr.Q * pr.b, pr.P * pr.a);
    for (int r = 0; r < pr.Q; ++r) B.middleRows(r * pr.b, pr.b) = candidate_rows(pr, probe, carriers, rows[r]);
    if (B.cols() - numerical_rank(B, opt.rank_tol) < pr.c) continue;
    const CMatrix Z = least_singular_directions(B, pr.c);
    bool blocks_ok = true;
    const Eigen::Index need = std::min(pr.a, pr.c);
    for (int s = 0; s < pr.P && blocks_ok; ++s) {
      Eigen::JacobiSVD<CMatrix> svd(Z.middleRows(s * pr.a, pr.a));
      blocks_ok = svd.singularValues()(need - 1) > opt.rank_tol;
    }
    if (!blocks_ok) continue;

    auto specs = orbit(pr, to_spec(pr, carriers, rows));
    try {
      const SynthesisReport rep = synthesize_with_specs(plan, specs, probe, opt.rank_tol);
      if (verify_ia(plan.cfg, probe, rep.t, 1e-8, opt.rank_tol).pass) return specs;
    } catch (const RankDeficiencyError&) {
    }
  }
  throw SearchExhaustedError("no aligned-matrix mask met the rank targets within " +
                                 std::to_string(opt.budget) + " attempts",
                             opt.budget);
}

using CacheKey = std::tuple<SystemConfig, int, std::uint64_t, std::uint64_t, double>;

std::shared_mutex& cache_mutex() {
  static std::shared_mutex m;
  return m;
}

std::map<CacheKey, std::vector<AlignedMatrixSpec>>& cache() {
  static std::map<CacheKey, std::vector<AlignedMatrixSpec>> c;
  return c;
}

}  // namespace

std::vector<AlignedMatrixSpec> aligned_matrix_specs(const SystemConfig& cfg, const SearchOptions& opt) {
  const AlignmentPlan plan = alignment_plan(cfg);
  if (!plan.d.is_integer() || !plan.columns.is_integer()) {
    throw RefusedError("aligned matrices need integral column counts; apply a spatial extension first");
  }
  const CacheKey key{cfg, opt.budget, opt.search_seed, opt.probe_seed, opt.rank_tol};
  {
    std::shared_lock lock(cache_mutex());
    if (auto it = cache().find(key); it != cache().end()) return it->second;
  }
  auto specs = search(plan, opt);
  std::unique_lock lock(cache_mutex());
  return cache().emplace(key, std::move(specs)).first->second;
}

}  // namespace iadof
