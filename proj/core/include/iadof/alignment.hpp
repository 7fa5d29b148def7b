#pragma once

#include "iadof/dof_bounds.hpp"

#include <cstdint>

namespace iadof {

// V: transmit-side aligned matrices (null space gives stacked V blocks).
// U: receive-side aligned matrices (left null space gives stacked U blocks).
enum class Flow { V, U };

std::string to_string(Flow f);

// Exact bookkeeping for the aligned-matrix construction of a Region II cfg.
struct AlignmentPlan {
  SystemConfig cfg;
  RegionClass region;
  Flow flow = Flow::V;
  Side side = Side::A;
  int n = 1;
  int index = 0;          // (p, q) index of the aligned matrices
  BigInt p;               // BS column blocks
  BigInt q;               // user row blocks
  std::int64_t kbar = 1;  // Kbar in the count and column formulas
  std::int64_t count = 0; // number of aligned matrices, G * kbar
  Rat d;                  // quantity bound at cfg
  Rat columns;            // null columns taken from each aligned matrix

  // Rows x cols of one aligned matrix: q*N x p*M.
  std::int64_t rows() const;
  std::int64_t cols() const;
  std::int64_t expected_rank() const;
};

// Throws RefusedError for Region I and limit points.
AlignmentPlan alignment_plan(const SystemConfig& cfg);

}  // namespace iadof
