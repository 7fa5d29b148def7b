#include "iadof_cli/cli.hpp"

#include "iadof/chain.hpp"
#include "iadof/errors.hpp"
#include "iadof/feasibility.hpp"
#include "iadof/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

namespace iadof::cli {

namespace {

using json = nlohmann::ordered_json;

struct Flags {
  std::int64_t G = 0, K = 0, M = 0, N = 0;
  bool force_json = false;
  // feasible
  std::string d;
  bool all_pairs = false;
  // sequences
  std::string side = "both";
  int n_max = 8;
  // synth
  std::uint64_t seed = 0;
  double zf_tol = 1e-8;
  double rank_tol = 1e-6;
  std::string dump;
  std::int64_t extension = 0;
  int budget = SearchOptions{}.budget;
  // sweep
  std::string m_range, n_range;
  std::string mode = "bounds";
  std::string format = "csv";
};

// Raised for malformed arguments that CLI11 cannot catch on its own.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

json rat_json(const Rat& r) {
  return {{"value", r.str()}, {"approx", r.is_infinite() ? json(nullptr) : json(r.to_double())}};
}

json opt_rat_json(const std::optional<Rat>& r) { return r ? rat_json(*r) : json(nullptr); }

json cfg_json(const SystemConfig& c) { return {{"G", c.G}, {"K", c.K}, {"M", c.M}, {"N", c.N}}; }

json region_json(const RegionClass& rc) {
  json j;
  j["region"] = to_string(rc.region);
  j["n"] = rc.n ? json(*rc.n) : json(nullptr);
  j["subcase"] = rc.subcase ? json(to_string(*rc.subcase)) : json(nullptr);
  j["limit_point"] = rc.limit_point;
  j["label"] = rc.label();
  return j;
}

json dof_json(const DoFReport& r) {
  json j;
  j["config"] = cfg_json(r.cfg);
  j["ratio"] = rat_json(r.cfg.ratio());
  j["region"] = region_json(r.region);
  j["d_decom"] = rat_json(r.d_decom);
  j["d_proper"] = rat_json(r.d_proper);
  j["d_quantity"] = opt_rat_json(r.d_quantity);
  j["d_upper"] = rat_json(r.d_upper);
  j["achievable_by"] = to_string(r.achievable_by);
  return j;
}

json binding_json(const std::optional<BindingPair>& b) {
  if (!b) return nullptr;
  return {{"side", to_string(b->side)}, {"n", b->n}, {"p", b->p.str()}, {"q", b->q.str()},
          {"bound", rat_json(b->bound)}};
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

int fail(std::ostream& err, int code, const std::string& kind, const std::string& msg, json extra = nullptr) {
  json j;
  j["error"] = kind;
  j["message"] = msg;
  j["exit_code"] = code;
  if (!extra.is_null()) j["detail"] = std::move(extra);
  err << j.dump() << '\n';
  return code;
}

SystemConfig config(const Flags& f) {
  SystemConfig c{f.G, f.K, f.M, f.N};
  c.validate();
  return c;
}

Rat parse_d(const std::string& text) {
  Rat d;
  try {
    d = Rat::parse(text);
  } catch (const std::invalid_argument&) {
    throw UsageError("--d must be an integer or p/q, got '" + text + "'");
  }
  if (d.is_infinite() || d.sign() <= 0) throw UsageError("--d must be positive");
  return d;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text, const char* flag) {
  const auto dots = text.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const std::int64_t v = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing");
      return {v, v};
    }
    const std::string lo_s = text.substr(0, dots), hi_s = text.substr(dots + 2);
    const std::int64_t lo = std::stoll(lo_s, &used);
    if (used != lo_s.size()) throw std::invalid_argument("trailing");
    const std::int64_t hi = std::stoll(hi_s, &used);
    if (used != hi_s.size()) throw std::invalid_argument("trailing");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError(std::string(flag) + " must be a..b or a single integer, got '" + text + "'");
  }
}

int cmd_dof(const Flags& f, std::ostream& out) {
  json j;
  j["command"] = "dof";
  j.update(dof_json(dof_upper(config(f))));
  emit(out, j);
  return kOk;
}

int cmd_feasible(const Flags& f, std::ostream& out) {
  const SystemConfig cfg = config(f);
  const Rat d = parse_d(f.d);
  FeasibilityOptions opt;
  opt.check_all_pairs = f.all_pairs;
  const FeasibilityVerdict v = feasible_linear(cfg, d, opt);
  json j;
  j["command"] = "feasible";
  j["config"] = cfg_json(cfg);
  j["d"] = rat_json(d);
  j["region"] = region_json(v.region);
  j["d_quantity"] = opt_rat_json(dof_quantity(cfg));
  j["linear"] = to_string(v.linear);
  j["asymptotic"] = to_string(v.asymptotic);
  j["proper_holds"] = v.proper_holds;
  j["binding_pair"] = binding_json(v.binding_pair);
  emit(out, j);
  return v.linear == LinearVerdict::Infeasible ? kRefused : kOk;
}

json genie_json(const GenieReport& g) {
  json j;
  j["d"] = rat_json(g.d);
  json dims = json::array();
  for (std::size_t i = 0; i < g.dims.size(); ++i) {
    dims.push_back({{"m", static_cast<int>(i) - 1}, {"value", rat_json(g.dims[i])}});
  }
  j["dims"] = dims;
  json slack = json::array();
  for (std::size_t i = 0; i < g.chain_slack.size(); ++i) {
    slack.push_back({{"m", static_cast<int>(i) + 1}, {"value", rat_json(g.chain_slack[i])}});
  }
  j["chain_slack"] = slack;
  j["terminal_slack"] = rat_json(g.terminal_slack);
  j["subspace_slack"] = rat_json(g.subspace_slack);
  j["feasible"] = g.feasible;
  j["first_violation"] = g.first_violation ? json(*g.first_violation) : json(nullptr);
  return j;
}

int cmd_chain(const Flags& f, std::ostream& out) {
  const SystemConfig cfg = config(f);
  const ChainReport ch = subspace_chain(cfg);
  json j;
  j["command"] = "chain";
  j["config"] = cfg_json(cfg);
  j["region"] = region_json(classify_region(cfg));
  j["side"] = to_string(ch.side);
  j["length"] = ch.length;
  json dims = json::array();
  for (std::size_t i = 0; i < ch.dims.size(); ++i) {
    dims.push_back({{"n", static_cast<int>(i) - 1}, {"value", rat_json(ch.dims[i])}});
  }
  j["dims"] = dims;
  const Rat bound = genie_bound_recursive(cfg);
  j["genie_bound"] = rat_json(bound);
  j["genie_at_bound"] = genie_json(genie_dims(cfg, bound));
  if (!f.d.empty()) j["genie_at_d"] = genie_json(genie_dims(cfg, parse_d(f.d)));
  emit(out, j);
  return kOk;
}

int cmd_sequences(const Flags& f, std::ostream& out) {
  if (f.G < 2 || f.K < 1) throw UsageError("need G >= 2 and K >= 1");
  if (f.n_max < 0) throw UsageError("--n-max must be >= 0");
  std::vector<Side> sides;
  if (f.side == "A" || f.side == "both") sides.push_back(Side::A);
  if (f.side == "B" || f.side == "both") sides.push_back(Side::B);
  json j;
  j["command"] = "sequences";
  j["G"] = f.G;
  j["K"] = f.K;
  j["infinite"] = sequences_infinite(f.G, f.K);
  for (Side s : sides) {
    json side;
    json pairs = json::array();
    for (const auto& x : pq_sequence(f.G, f.K, s, f.n_max)) {
      pairs.push_back({{"n", x.n}, {"p", x.p.str()}, {"q", x.q.str()}});
    }
    side["pairs"] = pairs;
    const auto c = c_sequence(f.G, f.K, s, f.n_max);
    json cs = json::array();
    for (std::size_t n = 0; n < c.size(); ++n) cs.push_back({{"n", n}, {"value", rat_json(c[n])}});
    side["C"] = cs;
    json ds = json::array();
    for (int n = 0; n + 1 < static_cast<int>(c.size()); ++n) {
      ds.push_back({{"n", n}, {"value", rat_json(d_boundary(f.G, f.K, s, n))}});
    }
    side["D"] = ds;
    side["limit"] = sequences_infinite(f.G, f.K) ? json(c_limit(f.G, f.K, s)) : json(nullptr);
    j[to_string(s)] = side;
  }
  emit(out, j);
  return kOk;
}

void dump_matrices(const std::string& dir, const SystemConfig& cfg, const ChannelSet& ch, const Transceiver& t) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto put = [&](const std::string& name, const CMatrix& A) {
    std::ofstream os(fs::path(dir) / name);
    if (!os) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    write_matrix(os, A);
  };
  for (std::int64_t i = 0; i < cfg.G; ++i) {
    for (std::int64_t k = 0; k < cfg.K; ++k) {
      for (std::int64_t j = 0; j < cfg.G; ++j) {
        put("H_" + std::to_string(i + 1) + "_" + std::to_string(k + 1) + "_" + std::to_string(j + 1) + ".txt",
            ch(static_cast<int>(i), static_cast<int>(k), static_cast<int>(j)));
      }
      put("U_" + std::to_string(i + 1) + "_" + std::to_string(k + 1) + ".txt", t.U[i * cfg.K + k]);
    }
    put("V_" + std::to_string(i + 1) + ".txt", t.V[i]);
  }
}

int cmd_synth(const Flags& f, std::ostream& out, std::ostream& err) {
  const SystemConfig cfg = config(f);
  const DoFReport dof = dof_upper(cfg);
  if (!dof.region.region_two() || dof.region.limit_point) {
    const std::string why = dof.region.region_two() ? "M/N sits at the sequence limit; the chain never terminates"
                                                    : "Region I: linear IA cannot reach the DoF bound";
    return fail(err, kRefused, "refused", why, dof_json(dof));
  }
  const std::int64_t m = f.extension > 0 ? f.extension : min_spatial_extension(cfg);
  const SystemConfig ext = cfg.extended(m);
  const AlignmentPlan plan = alignment_plan(ext);
  if (!plan.d.is_integer() || !plan.columns.is_integer()) {
    return fail(err, kRefused, "refused",
                "extension " + std::to_string(m) + " leaves a fractional stream or column count; need a multiple of " +
                    std::to_string(min_spatial_extension(cfg)),
                dof_json(dof));
  }
  const ChannelSet ch = gen_channels(ext, f.seed);
  SynthOptions opt;
  opt.rank_tol = f.rank_tol;
  opt.search.rank_tol = f.rank_tol;
  opt.search.budget = f.budget;
  const SynthesisReport sr = synthesize_detailed(ext, ch, opt);
  const VerificationReport v = verify_ia(ext, ch, sr.t, f.zf_tol, f.rank_tol);
  if (!f.dump.empty()) dump_matrices(f.dump, ext, ch, sr.t);

  json j;
  j["command"] = "synth";
  j["config"] = cfg_json(cfg);
  j["seed"] = f.seed;
  j["extension"] = m;
  j["extended"] = cfg_json(ext);
  j["d_quantity"] = rat_json(*dof.d_quantity);
  j["d"] = sr.t.d;
  j["region"] = region_json(plan.region);
  j["flow"] = to_string(plan.flow);
  json am;
  am["count"] = sr.specs.size();
  am["index"] = plan.index;
  am["rows"] = plan.rows();
  am["cols"] = plan.cols();
  am["expected_rank"] = plan.expected_rank();
  am["null_columns"] = plan.columns.numerator().convert_to<std::int64_t>();
  am["base"] = sr.specs.empty() ? json(nullptr) : json(sr.specs.front().render());
  am["ranks"] = sr.spec_ranks;
  am["nullities"] = sr.spec_nullities;
  j["aligned_matrices"] = am;
  j["residual_ranks"] = sr.residual_ranks;
  json vj;
  vj["zf_residual"] = v.zf_residual;
  vj["zf_tol"] = v.zf_tol;
  vj["rank_tol"] = v.rank_tol;
  vj["v_ranks"] = v.v_ranks;
  vj["u_ranks"] = v.u_ranks;
  vj["direct_ranks"] = v.direct_ranks;
  vj["direct_rank_ok"] = v.direct_rank_ok;
  vj["pass"] = v.pass;
  j["verification"] = vj;
  if (!f.dump.empty()) j["dump"] = f.dump;
  emit(out, j);
  return v.pass ? kOk : kVerificationFailed;
}

unsigned sweep_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("IA_DOF_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    } catch (const std::logic_error&) {
      throw UsageError("IA_DOF_THREADS must be a positive integer");
    }
  }
  return n;
}

json bounds_row(const SystemConfig& cfg) {
  const DoFReport r = dof_upper(cfg);
  json j;
  j["M"] = cfg.M;
  j["N"] = cfg.N;
  j["region"] = to_string(r.region.region);
  j["n"] = r.region.n ? json(*r.region.n) : json(nullptr);
  j["subcase"] = r.region.subcase ? json(to_string(*r.region.subcase)) : json(nullptr);
  j["limit_point"] = r.region.limit_point;
  j["d_decom"] = r.d_decom.str();
  j["d_proper"] = r.d_proper.str();
  j["d_quantity"] = r.d_quantity ? json(r.d_quantity->str()) : json(nullptr);
  j["d_upper"] = r.d_upper.str();
  j["d_upper_approx"] = r.d_upper.to_double();
  j["achievable_by"] = to_string(r.achievable_by);
  return j;
}

json feasibility_row(const SystemConfig& cfg, const Rat& d) {
  const FeasibilityVerdict v = feasible_linear(cfg, d);
  const auto dq = dof_quantity(cfg);
  json j;
  j["M"] = cfg.M;
  j["N"] = cfg.N;
  j["d"] = d.str();
  j["region"] = to_string(v.region.region);
  j["n"] = v.region.n ? json(*v.region.n) : json(nullptr);
  j["d_quantity"] = dq ? json(dq->str()) : json(nullptr);
  j["proper_holds"] = v.proper_holds;
  j["linear"] = to_string(v.linear);
  j["asymptotic"] = to_string(v.asymptotic);
  j["binding_side"] = v.binding_pair ? json(to_string(v.binding_pair->side)) : json(nullptr);
  j["binding_n"] = v.binding_pair ? json(v.binding_pair->n) : json(nullptr);
  j["binding_p"] = v.binding_pair ? json(v.binding_pair->p.str()) : json(nullptr);
  j["binding_q"] = v.binding_pair ? json(v.binding_pair->q.str()) : json(nullptr);
  return j;
}

std::string csv_field(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

int cmd_sweep(const Flags& f, std::ostream& out) {
  const auto [m_lo, m_hi] = parse_range(f.m_range, "--M");
  const auto [n_lo, n_hi] = parse_range(f.n_range, "--N");
  if (m_lo > m_hi || n_lo > n_hi) throw UsageError("empty --M or --N range");
  if (m_lo < 1 || n_lo < 1) throw UsageError("antenna counts must be >= 1");
  const bool feas = f.mode == "feasibility";
  std::optional<Rat> d;
  if (feas) {
    if (f.d.empty()) throw UsageError("--mode feasibility needs --d");
    d = parse_d(f.d);
  }
  SystemConfig{f.G, f.K, 1, 1}.validate();

  const std::int64_t cols = n_hi - n_lo + 1;
  const std::size_t total = static_cast<std::size_t>((m_hi - m_lo + 1) * cols);
  std::vector<json> rows(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const SystemConfig cfg{f.G, f.K, m_lo + static_cast<std::int64_t>(i) / cols,
                             n_lo + static_cast<std::int64_t>(i) % cols};
      try {
        rows[i] = feas ? feasibility_row(cfg, *d) : bounds_row(cfg);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n_threads = std::min<unsigned>(sweep_threads(), static_cast<unsigned>(total));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  if (f.force_json || f.format == "json") {
    json j;
    j["command"] = "sweep";
    j["mode"] = f.mode;
    j["G"] = f.G;
    j["K"] = f.K;
    if (d) j["d"] = d->str();
    j["rows"] = rows;
    emit(out, j);
    return kOk;
  }
  bool header = true;
  for (const auto& r : rows) {
    if (header) {
      std::string line;
      for (const auto& [key, value] : r.items()) line += (line.empty() ? "" : ",") + key;
      out << line << '\n';
      header = false;
    }
    std::string line;
    bool first = true;
    for (const auto& [key, value] : r.items()) {
      line += (first ? "" : ",") + csv_field(value);
      first = false;
    }
    out << line << '\n';
  }
  return kOk;
}

constexpr const char* kSweepFooter =
    "CSV columns, bounds mode:\n"
    "  M,N,region,n,subcase,limit_point,d_decom,d_proper,d_quantity,d_upper,d_upper_approx,achievable_by\n"
    "CSV columns, feasibility mode:\n"
    "  M,N,d,region,n,d_quantity,proper_holds,linear,asymptotic,binding_side,binding_n,binding_p,binding_q\n"
    "Rationals are num/den strings; empty fields mean not applicable.\n"
    "Rows are ordered M-major, then N. IA_DOF_THREADS caps worker threads.";

void add_cfg(CLI::App* sub, Flags& f, bool with_mn) {
  sub->add_option("--G", f.G, "number of cells (>= 2)")->required();
  sub->add_option("--K", f.K, "users per cell (>= 1)")->required();
  if (with_mn) {
    sub->add_option("--M", f.M, "BS antennas")->required();
    sub->add_option("--N", f.N, "user antennas")->required();
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"DoF bounds, IA feasibility and transceiver synthesis for G-cell K-user MxN MIMO-IBC", "iadof"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", f.force_json, "force JSON output everywhere");

  auto* dof = app.add_subcommand("dof", "DoF bounds, region and achievability");
  add_cfg(dof, f, true);

  auto* feas = app.add_subcommand("feasible", "linear and asymptotic IA feasibility for d streams per user");
  add_cfg(feas, f, true);
  feas->add_option("--d", f.d, "streams per user, integer or p/q")->required();
  feas->add_flag("--all-pairs", f.all_pairs, "test every (p,q) pair up to the cap, not just up to the region index");

  auto* chain = app.add_subcommand("chain", "irresolvable subspace chain and genie bound");
  add_cfg(chain, f, true);
  chain->add_option("--d", f.d, "also report maximal genie dimensions at this d");

  auto* seq = app.add_subcommand("sequences", "(p,q) pairs, C_n and D_n boundaries");
  add_cfg(seq, f, false);
  seq->add_option("--side", f.side, "A, B or both")->check(CLI::IsMember({"A", "B", "both"}));
  seq->add_option("--n-max", f.n_max, "largest index");

  auto* synth = app.add_subcommand("synth", "build and verify a linear IA transceiver on random channels");
  add_cfg(synth, f, true);
  synth->add_option("--seed", f.seed, "channel seed");
  synth->add_option("--zf-tol", f.zf_tol, "zero-forcing residual tolerance");
  synth->add_option("--rank-tol", f.rank_tol, "relative singular value threshold for ranks");
  synth->add_option("--dump", f.dump, "directory for H, U, V matrix files");
  synth->add_option("--extension", f.extension, "spatial extension m (default: minimal)")->check(CLI::PositiveNumber);
  synth->add_option("--budget", f.budget, "aligned-matrix search attempts")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "bounds or feasibility over an (M, N) grid");
  sweep->add_option("--G", f.G, "number of cells (>= 2)")->required();
  sweep->add_option("--K", f.K, "users per cell (>= 1)")->required();
  sweep->add_option("--M", f.m_range, "BS antenna range a..b")->required();
  sweep->add_option("--N", f.n_range, "user antenna range a..b")->required();
  sweep->add_option("--mode", f.mode, "bounds or feasibility")->check(CLI::IsMember({"bounds", "feasibility"}));
  sweep->add_option("--d", f.d, "streams per user (feasibility mode)");
  sweep->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->footer(kSweepFooter);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return fail(err, kUsage, "usage", e.what());
  }

  try {
    if (dof->parsed()) return cmd_dof(f, out);
    if (feas->parsed()) return cmd_feasible(f, out);
    if (chain->parsed()) return cmd_chain(f, out);
    if (seq->parsed()) return cmd_sequences(f, out);
    if (synth->parsed()) return cmd_synth(f, out, err);
    if (sweep->parsed()) return cmd_sweep(f, out);
  } catch (const std::invalid_argument& e) {
    return fail(err, kUsage, "usage", e.what());
  } catch (const RefusedError& e) {
    return fail(err, kRefused, "refused", e.what());
  } catch (const SearchExhaustedError& e) {
    return fail(err, kVerificationFailed, "search-exhausted", e.what(), json{{"budget", e.budget()}});
  } catch (const RankDeficiencyError& e) {
    return fail(err, kVerificationFailed, "rank-deficiency", e.what());
  } catch (const std::exception& e) {
    return fail(err, 1, "internal", e.what());
  }
  return fail(err, kUsage, "usage", "no command");
}

}  // namespace iadof::cli
