#pragma once

#include "iadof/alignment.hpp"
#include "iadof/channels.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace iadof {

// Block matrix over user row blocks and BS column blocks. Entry (r, s) is
// H_{row_blocks[r], col_blocks[s]} when mask[r][s] is set, zero otherwise.
// V side: right null space gives stacked transmit vectors, one M block per
// column block. U side: left null space gives stacked receive vectors, one
// N block per row block.
struct AlignedMatrixSpec {
  Flow side = Flow::V;
  std::vector<UserId> row_blocks;
  std::vector<int> col_blocks;
  std::vector<std::vector<bool>> mask;
  std::int64_t expected_rank = 0;
  std::int64_t null_columns = 0;

  std::string render() const;  // 1-based, e.g. "[[H(1_1,2) H(1_1,3) 0] ...]"
};

CMatrix assemble(const AlignedMatrixSpec& spec, const ChannelSet& ch);

struct SearchOptions {
  int budget = 400;
  std::uint64_t search_seed = 1;
  std::uint64_t probe_seed = 0x9e3779b97f4a7c15ULL;
  double rank_tol = 1e-6;
};

// cfg must already include any spatial extension (integral column counts).
// Results are cached per (cfg, options); the cache is safe to share across threads.
std::vector<AlignedMatrixSpec> aligned_matrix_specs(const SystemConfig& cfg,
                                                    const SearchOptions& opt = {});

struct Transceiver {
  std::int64_t d = 0;
  std::vector<CMatrix> V;  // per BS, M x Kd
  std::vector<CMatrix> U;  // per user (cell-major), N x d

  const CMatrix& u(const UserId& id, std::int64_t K) const {
    return U.at(static_cast<std::size_t>(id.cell * K + id.index));
  }
};

struct SynthesisReport {
  AlignmentPlan plan;
  std::vector<AlignedMatrixSpec> specs;
  std::vector<int> spec_ranks;
  std::vector<int> spec_nullities;
  // rank of Q^U per user (V flow) or of Q^V per BS (U flow)
  std::vector<int> residual_ranks;
  Transceiver t;
};

struct SynthOptions {
  SearchOptions search;
  double rank_tol = 1e-6;
};

SynthesisReport synthesize_detailed(const SystemConfig& cfg, const ChannelSet& ch,
                                    const SynthOptions& opt = {});
Transceiver synthesize(const SystemConfig& cfg, const ChannelSet& ch, const SynthOptions& opt = {});

// Synthesis from explicit specs (used by the search to probe candidates).
SynthesisReport synthesize_with_specs(const AlignmentPlan& plan, std::vector<AlignedMatrixSpec> specs,
                                      const ChannelSet& ch, double rank_tol);

struct VerificationReport {
  double zf_residual = 0.0;
  std::vector<bool> direct_rank_ok;  // per cell
  std::vector<int> direct_ranks;
  std::vector<int> v_ranks;
  std::vector<int> u_ranks;
  bool pass = false;
  double zf_tol = 1e-8;
  double rank_tol = 1e-6;
};

VerificationReport verify_ia(const SystemConfig& cfg, const ChannelSet& ch, const Transceiver& t,
                             double zf_tol = 1e-8, double rank_tol = 1e-6);

// Singular values above rank_tol * sigma_max.
int numerical_rank(const CMatrix& A, double rank_tol);
// The `count` right singular vectors of A with the smallest singular values
// (orthonormal columns). A with zero rows yields identity columns.
CMatrix least_singular_directions(const CMatrix& A, Eigen::Index count);
void normalize_columns(CMatrix& A);

}  // namespace iadof
