#pragma once

#include "iadof/dof_bounds.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace iadof {

using CMatrix = Eigen::MatrixXcd;

struct UserId {
  int cell = 0;
  int index = 0;
  friend bool operator==(const UserId&, const UserId&) = default;
  friend auto operator<=>(const UserId&, const UserId&) = default;
};

// H[i][k][j]: N x M channel from BS j to user i_k.
struct ChannelSet {
  SystemConfig cfg;
  std::uint64_t seed = 0;
  std::vector<CMatrix> H;

  const CMatrix& operator()(int i, int k, int j) const;
  const CMatrix& operator()(const UserId& u, int j) const { return (*this)(u.cell, u.index, j); }
};

// Entries i.i.d. CN(0, 1): real and imaginary parts N(0, 1/2), drawn from
// std::mt19937_64(seed) in order i, k, j, row, col.
ChannelSet gen_channels(const SystemConfig& cfg, std::uint64_t seed);

// "rows cols" then row-major "re,im" entries separated by spaces.
void write_matrix(std::ostream& os, const CMatrix& A);
CMatrix read_matrix(std::istream& is);

}  // namespace iadof
