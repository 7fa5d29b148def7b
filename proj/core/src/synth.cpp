#include "iadof/synth.hpp"

#include "iadof/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <sstream>

namespace iadof {

namespace {

std::int64_t as_int(const Rat& r, const char* what) {
  if (!r.is_integer()) {
    throw RefusedError(std::string(what) + " is not an integer (" + r.str() +
                       "); apply a spatial extension first");
  }
  return r.numerator().convert_to<std::int64_t>();
}

void append_cols(CMatrix& dst, const CMatrix& blk) {
  if (dst.cols() == 0) {
    dst = blk;
    return;
  }
  CMatrix out(dst.rows(), dst.cols() + blk.cols());
  out << dst, blk;
  dst = std::move(out);
}

}  // namespace

int numerical_rank(const CMatrix& A, double rank_tol) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  Eigen::BDCSVD<CMatrix> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<int>((s.array() > rank_tol * s(0)).count());
}

CMatrix least_singular_directions(const CMatrix& A, Eigen::Index count) {
  const Eigen::Index n = A.cols();
  if (count > n) throw RankDeficiencyError("requested more directions than columns");
  if (A.rows() == 0) return CMatrix::Identity(n, n).leftCols(count);
  Eigen::BDCSVD<CMatrix> svd(A, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(count);
}

void normalize_columns(CMatrix& A) {
  for (Eigen::Index c = 0; c < A.cols(); ++c) {
    const double nrm = A.col(c).norm();
    if (nrm > 0.0) A.col(c) /= nrm;
  }
}

std::string AlignedMatrixSpec::render() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < row_blocks.size(); ++r) {
    os << (r ? " [" : "[");
    for (std::size_t s = 0; s < col_blocks.size(); ++s) {
      if (s) os << ' ';
      if (mask[r][s]) {
        os << "H(" << row_blocks[r].cell + 1 << '_' << row_blocks[r].index + 1 << ',' << col_blocks[s] + 1
           << ')';
      } else {
        os << '0';
      }
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

CMatrix assemble(const AlignedMatrixSpec& spec, const ChannelSet& ch) {
  const Eigen::Index N = ch.cfg.N, M = ch.cfg.M;
  CMatrix A = CMatrix::Zero(static_cast<Eigen::Index>(spec.row_blocks.size()) * N,
                            static_cast<Eigen::Index>(spec.col_blocks.size()) * M);
  for (std::size_t r = 0; r < spec.row_blocks.size(); ++r) {
    for (std::size_t s = 0; s < spec.col_blocks.size(); ++s) {
      if (spec.mask[r][s]) {
        A.block(static_cast<Eigen::Index>(r) * N, static_cast<Eigen::Index>(s) * M, N, M) =
            ch(spec.row_blocks[r], spec.col_blocks[s]);
      }
    }
  }
  return A;
}

SynthesisReport synthesize_with_specs(const AlignmentPlan& plan, std::vector<AlignedMatrixSpec> specs,
                                      const ChannelSet& ch, double rank_tol) {
  const SystemConfig& cfg = plan.cfg;
  const std::int64_t d = as_int(plan.d, "d");
  const std::int64_t c = as_int(plan.columns, "aligned-matrix column count");
  const Eigen::Index M = cfg.M, N = cfg.N;
  const std::int64_t users = cfg.G * cfg.K;

  SynthesisReport rep;
  rep.plan = plan;
  rep.t.d = d;
  rep.t.V.assign(static_cast<std::size_t>(cfg.G), CMatrix(M, 0));
  rep.t.U.assign(static_cast<std::size_t>(users), CMatrix(N, 0));

  for (const auto& spec : specs) {
    const CMatrix A = assemble(spec, ch);
    const int rank = numerical_rank(A, rank_tol);
    const int nullity = static_cast<int>(plan.flow == Flow::V ? A.cols() : A.rows()) - rank;
    rep.spec_ranks.push_back(rank);
    rep.spec_nullities.push_back(nullity);
    if (nullity < c) {
      throw RankDeficiencyError("aligned matrix " + spec.render() + " has nullity " +
                                std::to_string(nullity) + " < " + std::to_string(c));
    }
    if (plan.flow == Flow::V) {
      const CMatrix W = least_singular_directions(A, c);
      for (std::size_t s = 0; s < spec.col_blocks.size(); ++s) {
        append_cols(rep.t.V[static_cast<std::size_t>(spec.col_blocks[s])],
                    W.block(static_cast<Eigen::Index>(s) * M, 0, M, c));
      }
    } else {
      const CMatrix W = least_singular_directions(A.adjoint(), c);
      for (std::size_t r = 0; r < spec.row_blocks.size(); ++r) {
        const auto& u = spec.row_blocks[r];
        append_cols(rep.t.U[static_cast<std::size_t>(u.cell * cfg.K + u.index)],
                    W.block(static_cast<Eigen::Index>(r) * N, 0, N, c));
      }
    }
  }

  if (plan.flow == Flow::V) {
    for (std::int64_t j = 0; j < cfg.G; ++j) {
      if (rep.t.V[j].cols() != cfg.K * d) {
        throw RankDeficiencyError("BS " + std::to_string(j + 1) + " received " +
                                  std::to_string(rep.t.V[j].cols()) + " transmit vectors, expected " +
                                  std::to_string(cfg.K * d));
      }
    }
    for (std::int64_t i = 0; i < cfg.G; ++i) {
      for (std::int64_t k = 0; k < cfg.K; ++k) {
        CMatrix Q(N, 0);
        for (std::int64_t j = 0; j < cfg.G; ++j) {
          if (j != i) append_cols(Q, ch(i, k, j) * rep.t.V[j]);
        }
        const int r = numerical_rank(Q, rank_tol);
        rep.residual_ranks.push_back(r);
        if (N - r < d) throw RankDeficiencyError("residual interference leaves fewer than d receive dimensions");
        rep.t.U[i * cfg.K + k] = least_singular_directions(Q.adjoint(), d);
      }
    }
  } else {
    for (std::int64_t u = 0; u < users; ++u) {
      if (rep.t.U[u].cols() != d) {
        throw RankDeficiencyError("user received " + std::to_string(rep.t.U[u].cols()) +
                                  " receive vectors, expected " + std::to_string(d));
      }
    }
    for (std::int64_t j = 0; j < cfg.G; ++j) {
      CMatrix Q(0, M);
      for (std::int64_t i = 0; i < cfg.G; ++i) {
        if (i == j) continue;
        for (std::int64_t k = 0; k < cfg.K; ++k) {
          CMatrix row = rep.t.U[i * cfg.K + k].adjoint() * ch(i, k, j);
          CMatrix grown(Q.rows() + row.rows(), M);
          grown << Q, row;
          Q = std::move(grown);
        }
      }
      const int r = numerical_rank(Q, rank_tol);
      rep.residual_ranks.push_back(r);
      if (M - r < cfg.K * d) throw RankDeficiencyError("residual interference leaves fewer than Kd transmit dimensions");
      rep.t.V[j] = least_singular_directions(Q, cfg.K * d);
    }
  }
  for (auto& v : rep.t.V) normalize_columns(v);
  for (auto& u : rep.t.U) normalize_columns(u);
  rep.specs = std::move(specs);
  return rep;
}

SynthesisReport synthesize_detailed(const SystemConfig& cfg, const ChannelSet& ch, const SynthOptions& opt) {
  if (!(ch.cfg == cfg)) throw std::invalid_argument("channel set was drawn for a different configuration");
  const AlignmentPlan plan = alignment_plan(cfg);
  as_int(plan.d, "d");
  as_int(plan.columns, "aligned-matrix column count");
  return synthesize_with_specs(plan, aligned_matrix_specs(cfg, opt.search), ch, opt.rank_tol);
}

Transceiver synthesize(const SystemConfig& cfg, const ChannelSet& ch, const SynthOptions& opt) {
  return synthesize_detailed(cfg, ch, opt).t;
}

VerificationReport verify_ia(const SystemConfig& cfg, const ChannelSet& ch, const Transceiver& t,
                             double zf_tol, double rank_tol) {
  const std::int64_t users = cfg.G * cfg.K;
  if (static_cast<std::int64_t>(t.V.size()) != cfg.G || static_cast<std::int64_t>(t.U.size()) != users) {
    throw std::invalid_argument("transceiver does not match the configuration");
  }
  VerificationReport rep;
  rep.zf_tol = zf_tol;
  rep.rank_tol = rank_tol;
  bool ranks_ok = true;
  for (const auto& v : t.V) {
    const int r = numerical_rank(v, rank_tol);
    rep.v_ranks.push_back(r);
    ranks_ok = ranks_ok && v.rows() == cfg.M && v.cols() == cfg.K * t.d && r == cfg.K * t.d;
  }
  for (const auto& u : t.U) {
    const int r = numerical_rank(u, rank_tol);
    rep.u_ranks.push_back(r);
    ranks_ok = ranks_ok && u.rows() == cfg.N && u.cols() == t.d && r == t.d;
  }
  for (std::int64_t i = 0; i < cfg.G; ++i) {
    for (std::int64_t k = 0; k < cfg.K; ++k) {
      const CMatrix& U = t.U[i * cfg.K + k];
      for (std::int64_t j = 0; j < cfg.G; ++j) {
        if (j == i) continue;
        const CMatrix& H = ch(i, k, j);
        const double den = U.norm() * H.norm() * t.V[j].norm();
        if (U.cols() != 0 && t.V[j].cols() != 0 && U.rows() == H.rows() && t.V[j].rows() == H.cols()) {
          const double num = (U.adjoint() * H * t.V[j]).norm();
          rep.zf_residual = std::max(rep.zf_residual, den > 0.0 ? num / den : 1.0);
        }
      }
    }
  }
  bool direct_ok = true;
  for (std::int64_t i = 0; i < cfg.G; ++i) {
    int r = 0;
    if (t.V[i].rows() == cfg.M) {
      CMatrix S(0, t.V[i].cols());
      for (std::int64_t k = 0; k < cfg.K; ++k) {
        const CMatrix& U = t.U[i * cfg.K + k];
        if (U.rows() != cfg.N) continue;
        CMatrix row = U.adjoint() * ch(i, k, i) * t.V[i];
        CMatrix grown(S.rows() + row.rows(), S.cols());
        grown << S, row;
        S = std::move(grown);
      }
      r = numerical_rank(S, rank_tol);
    }
    rep.direct_ranks.push_back(r);
    rep.direct_rank_ok.push_back(r == cfg.K * t.d);
    direct_ok = direct_ok && r == cfg.K * t.d;
  }
  rep.pass = ranks_ok && direct_ok && rep.zf_residual <= zf_tol;
  return rep;
}

}  // namespace iadof
