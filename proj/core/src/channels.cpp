#include "iadof/channels.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

namespace iadof {

const CMatrix& ChannelSet::operator()(int i, int k, int j) const {
  const std::size_t idx = (static_cast<std::size_t>(i) * cfg.K + k) * cfg.G + j;
  return H.at(idx);
}

ChannelSet gen_channels(const SystemConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  ChannelSet ch;
  ch.cfg = cfg;
  ch.seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  ch.H.reserve(static_cast<std::size_t>(cfg.G * cfg.K * cfg.G));
  for (std::int64_t i = 0; i < cfg.G; ++i) {
    for (std::int64_t k = 0; k < cfg.K; ++k) {
      for (std::int64_t j = 0; j < cfg.G; ++j) {
        CMatrix h(cfg.N, cfg.M);
        for (Eigen::Index r = 0; r < h.rows(); ++r) {
          for (Eigen::Index c = 0; c < h.cols(); ++c) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            h(r, c) = {re, im};
          }
        }
        ch.H.push_back(std::move(h));
      }
    }
  }
  return ch;
}

void write_matrix(std::ostream& os, const CMatrix& A) {
  os << A.rows() << ' ' << A.cols() << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    for (Eigen::Index c = 0; c < A.cols(); ++c) {
      if (c) os << ' ';
      os << A(r, c).real() << ',' << A(r, c).imag();
    }
    os << '\n';
  }
}

CMatrix read_matrix(std::istream& is) {
  Eigen::Index rows = 0, cols = 0;
  if (!(is >> rows >> cols) || rows < 0 || cols < 0) throw std::runtime_error("matrix dump: bad header");
  CMatrix A(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double re = 0, im = 0;
      char comma = 0;
      if (!(is >> re >> comma >> im) || comma != ',') throw std::runtime_error("matrix dump: bad entry");
      A(r, c) = {re, im};
    }
  }
  return A;
}

}  // namespace iadof
