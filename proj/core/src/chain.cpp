#include "iadof/chain.hpp"

#include "iadof/errors.hpp"

#include <stdexcept>

namespace iadof {

namespace {

// Step multiplier a_m: (G-1)Kbar_{m-1} on side A, (G-1)Kbar_m on side B.
Rat multiplier(const SystemConfig& cfg, Side side, int m) {
  return Rat((cfg.G - 1) * kbar(cfg.K, side == Side::A ? m - 1 : m));
}

// k * g_m <= j * g_{m-1} + c
struct Piece {
  Rat k;
  bool j;
  Rat c;
};

struct Elimination {
  ChainReport chain;
  // levels[l] holds the pieces bounding g_l, l = 0 .. n-1.
  std::vector<std::vector<Piece>> levels;
};

ChainReport chain_dims(const SystemConfig& cfg);

Elimination eliminate(const SystemConfig& cfg) {
  Elimination e;
  e.chain = chain_dims(cfg);
  const int n = e.chain.length;
  const Side side = e.chain.side;
  e.levels.resize(n);
  e.levels[n - 1] = {{multiplier(cfg, side, n), true, Rat(0)}, {Rat(1), false, e.chain.dims[n]}};
  for (int m = n - 1; m >= 1; --m) {
    const Rat a = multiplier(cfg, side, m);
    auto& out = e.levels[m - 1];
    for (const Piece& p : e.levels[m]) {
      Rat k = p.j ? a - Rat(1) / p.k : a;
      if (k.sign() <= 0) continue;  // satisfied by any nonnegative g
      out.push_back({std::move(k), true, p.c / p.k});
    }
    if (out.empty()) throw std::logic_error("genie elimination lost every constraint");
  }
  return e;
}

std::pair<Rat, Rat> seeds(const SystemConfig& cfg, Side side, const Rat& d) {
  const Rat k(cfg.K);
  if (side == Side::A) return {Rat(cfg.M) - k * d, d};
  return {Rat(cfg.N) - d, k * d};
}

ChainReport chain_dims(const SystemConfig& cfg) {
  const RegionClass rc = classify_region(cfg);
  if (!rc.region_two()) throw NonTerminatingChain();
  if (rc.limit_point) throw NonTerminatingChain("non-terminating (M/N at the sequence limit)");
  ChainReport rep;
  rep.side = rc.side();
  const Rat M(cfg.M), N(cfg.N);
  rep.dims = rep.side == Side::A ? std::vector<Rat>{M, N} : std::vector<Rat>{N, M};
  const int cap = *rc.n + 2;
  const auto pq = pq_sequence(cfg.G, cfg.K, rep.side, cap);
  for (int n = 1;; ++n) {
    if (n > cap) throw std::logic_error("subspace chain exceeded its region index");
    const std::size_t i = static_cast<std::size_t>(n) + 1;
    Rat next = positive_part(multiplier(cfg, rep.side, n) * rep.dims[i - 1] - rep.dims[i - 2]);
    if (i < pq.size()) {
      const Rat p(pq[i].p), q(pq[i].q);
      const Rat closed = positive_part(rep.side == Side::A ? q * N - p * M : p * M - q * N);
      if (closed != next) throw std::logic_error("chain recursion disagrees with closed form");
    }
    const bool done = next.is_zero();
    rep.dims.push_back(std::move(next));
    if (done) {
      rep.length = n;
      return rep;
    }
  }
}

}  // namespace

std::vector<Rat> GenieReport::genies() const {
  if (dims.size() <= 2) return {};
  return {dims.begin() + 2, dims.end()};
}

ChainReport subspace_chain(const SystemConfig& cfg) {
  ChainReport rep = chain_dims(cfg);
  rep.genie_dims = genie_dims(cfg, genie_bound_recursive(cfg)).genies();
  return rep;
}

Rat genie_bound_recursive(const SystemConfig& cfg) {
  const Elimination e = eliminate(cfg);
  const Rat k(cfg.K);
  const bool a_side = e.chain.side == Side::A;
  // Nonnegativity of |G_{-1}|.
  Rat best = a_side ? Rat(cfg.M) / k : Rat(cfg.N);
  for (const Piece& p : e.levels[0]) {
    const Rat j(p.j ? 1 : 0);
    const Rat bound = a_side ? (j * Rat(cfg.M) + p.c) / (p.k + j * k)
                             : (j * Rat(cfg.N) + p.c) / (p.k * k + j);
    best = min(best, bound);
  }
  return best;
}

GenieReport genie_dims(const SystemConfig& cfg, const Rat& d) {
  if (d.sign() < 0 || d.is_infinite()) throw std::invalid_argument("genie_dims: d must be finite and >= 0");
  const Elimination e = eliminate(cfg);
  GenieReport rep;
  rep.side = e.chain.side;
  rep.length = e.chain.length;
  rep.d = d;
  const int n = rep.length;
  auto [g_m1, g_0] = seeds(cfg, rep.side, d);
  rep.dims = {g_m1, g_0};
  auto flag = [&rep](const Rat& slack, std::string what) {
    if (slack.sign() < 0 && !rep.first_violation) {
      rep.feasible = false;
      rep.first_violation = std::move(what);
    }
  };
  flag(g_m1, "nonnegative(m=-1)");
  for (int m = 1; m <= n - 1; ++m) {
    const Rat& prev = rep.dims[static_cast<std::size_t>(m)];
    std::optional<Rat> g;
    for (const Piece& p : e.levels[m]) {
      Rat v = ((p.j ? prev : Rat(0)) + p.c) / p.k;
      g = g ? min(*g, v) : v;
    }
    rep.dims.push_back(positive_part(*g));
  }
  auto at = [&rep](int m) -> const Rat& { return rep.dims[static_cast<std::size_t>(m + 1)]; };
  for (int m = 1; m <= n - 1; ++m) {
    Rat slack = at(m - 2) + at(m) - multiplier(cfg, rep.side, m) * at(m - 1);
    flag(slack, "chain(m=" + std::to_string(m) + ")");
    rep.chain_slack.push_back(std::move(slack));
  }
  rep.terminal_slack = at(n - 2) - multiplier(cfg, rep.side, n) * at(n - 1);
  flag(rep.terminal_slack, "terminal");
  rep.subspace_slack = e.chain.dims[static_cast<std::size_t>(n)] - at(n - 1);
  flag(rep.subspace_slack, "subspace");
  return rep;
}

}  // namespace iadof
