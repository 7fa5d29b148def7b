#include "iadof/errors.hpp"
#include "iadof/feasibility.hpp"
#include "iadof/synth.hpp"

#include <doctest.h>

#include <random>
#include <sstream>
#include <thread>

using namespace iadof;

namespace {

CMatrix random_unitary(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMatrix A(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = {g(rng), g(rng)};
  }
  Eigen::HouseholderQR<CMatrix> qr(A);
  return qr.householderQ() * CMatrix::Identity(n, n);
}

bool touches_own_cell(const AlignedMatrixSpec& s) {
  for (std::size_t r = 0; r < s.row_blocks.size(); ++r) {
    for (std::size_t c = 0; c < s.col_blocks.size(); ++c) {
      if (s.mask[r][c] && s.row_blocks[r].cell == s.col_blocks[c]) return true;
    }
  }
  return false;
}

}  // namespace

TEST_SUITE("synth") {
  TEST_CASE("channel generation") {
    const SystemConfig cfg{3, 2, 5, 7};
    const auto a = gen_channels(cfg, 42);
    CHECK(a.H.size() == 18);
    for (const auto& h : a.H) {
      CHECK(h.rows() == 7);
      CHECK(h.cols() == 5);
    }
    const auto b = gen_channels(cfg, 42);
    for (std::size_t i = 0; i < a.H.size(); ++i) CHECK(a.H[i] == b.H[i]);
    CHECK_FALSE(gen_channels(cfg, 43).H[0] == a.H[0]);

    const auto c = gen_channels({3, 1, 5, 7}, 1);
    double sum = 0;
    int cnt = 0;
    for (const auto& h : c.H) {
      sum += h.cwiseAbs2().sum();
      cnt += static_cast<int>(h.size());
    }
    CHECK(cnt == 315);
    CHECK(std::abs(sum / cnt - 1.0) < 3.0 / std::sqrt(315.0));
  }

  TEST_CASE("matrix dump round trip") {
    const auto ch = gen_channels({2, 1, 3, 2}, 5);
    std::stringstream ss;
    write_matrix(ss, ch.H[1]);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "2 3");
    ss.seekg(0);
    CHECK(read_matrix(ss) == ch.H[1]);
  }

  TEST_CASE("null directions of an empty constraint set") {
    const CMatrix A(0, 4);
    CHECK(least_singular_directions(A, 2) == CMatrix::Identity(4, 4).leftCols(2));
    CHECK(numerical_rank(A, 1e-6) == 0);
  }

  TEST_CASE("aligned matrices for the three-cell example") {
    const auto specs = aligned_matrix_specs({3, 1, 5, 7});
    REQUIRE(specs.size() == 3);
    for (const auto& s : specs) {
      CHECK(s.side == Flow::V);
      CHECK(s.row_blocks.size() == 2);
      CHECK(s.col_blocks.size() == 3);
      CHECK(s.expected_rank == 14);
      CHECK(s.null_columns == 1);
      CHECK_FALSE(touches_own_cell(s));
    }
    CHECK(specs[0].render() == "[[H(1_1,2) H(1_1,3) 0] [0 H(2_1,3) H(2_1,1)]]");
    const auto ch = gen_channels({3, 1, 5, 7}, 11);
    for (const auto& s : specs) CHECK(numerical_rank(assemble(s, ch), 1e-6) == 14);
  }

  TEST_CASE("three-cell single-user family gives banded chains") {
    for (std::int64_t n = 2; n <= 6; ++n) {
      const SystemConfig cfg{3, 1, 2 * n - 1, 2 * n + 1};
      const auto specs = aligned_matrix_specs(cfg);
      REQUIRE(specs.size() == 3);
      const auto& s = specs[0];
      CHECK(s.row_blocks.size() == static_cast<std::size_t>(n - 1));
      CHECK(s.col_blocks.size() == static_cast<std::size_t>(n));
      for (std::size_t r = 0; r < s.row_blocks.size(); ++r) {
        CHECK(s.mask[r][r]);
        CHECK(s.mask[r][r + 1]);
        CHECK(std::count(s.mask[r].begin(), s.mask[r].end(), true) == 2);
      }
    }
  }

  TEST_CASE("receive-side aligned matrices with repeated BS columns") {
    // II-B(2), N-limited, G = 4; extension 4 makes the counts integral
    const SystemConfig base{4, 1, 5, 14};
    CHECK(min_spatial_extension(base) == 4);
    const SystemConfig cfg = base.extended(4);
    const auto specs = aligned_matrix_specs(cfg);
    REQUIRE(specs.size() == 4);
    CHECK(specs[0].side == Flow::U);
    CHECK(specs[0].row_blocks.size() == 3);
    CHECK(specs[0].col_blocks.size() == 8);
    for (const auto& s : specs) CHECK_FALSE(touches_own_cell(s));
    const auto ch = gen_channels(cfg, 3);
    const auto t = synthesize(cfg, ch);
    CHECK(verify_ia(cfg, ch, t).pass);
  }

  TEST_CASE("transmit-side synthesis for the three-cell example") {
    const SystemConfig cfg{3, 1, 5, 7};
    const auto ch = gen_channels(cfg, 7);
    const auto rep = synthesize_detailed(cfg, ch);
    CHECK(rep.t.d == 3);
    for (const auto& v : rep.t.V) {
      CHECK(v.rows() == 5);
      CHECK(v.cols() == 3);
    }
    for (const auto& u : rep.t.U) {
      CHECK(u.rows() == 7);
      CHECK(u.cols() == 3);
    }
    for (int nul : rep.spec_nullities) CHECK(nul == 1);
    for (int r : rep.residual_ranks) CHECK(r == 4);
    const auto v = verify_ia(cfg, ch, rep.t);
    CHECK(v.pass);
    CHECK(v.zf_residual <= 1e-8);
  }

  TEST_CASE("chain length one is plain zero-forcing") {
    const SystemConfig cfg{3, 2, 24, 6};
    const auto ch = gen_channels(cfg, 0);
    const auto rep = synthesize_detailed(cfg, ch);
    CHECK(rep.plan.flow == Flow::U);
    for (int r : rep.residual_ranks) CHECK(r == 16);
    for (const auto& v : rep.t.V) CHECK(v.cols() == 8);
    CHECK(verify_ia(cfg, ch, rep.t).pass);
  }

  TEST_CASE("two-user chain of length two") {
    const SystemConfig cfg{3, 2, 11, 3};
    const auto ch = gen_channels(cfg, 1);
    const auto rep = synthesize_detailed(cfg, ch);
    REQUIRE(rep.specs.size() == 6);
    for (const auto& s : rep.specs) {
      CHECK(assemble(s, ch).rows() == 21);
      CHECK(assemble(s, ch).cols() == 22);
    }
    for (int nul : rep.spec_nullities) CHECK(nul == 1);
    CHECK(verify_ia(cfg, ch, rep.t).pass);
  }

  TEST_CASE("verification catches broken transceivers") {
    const SystemConfig cfg{3, 1, 5, 7};
    const auto ch = gen_channels(cfg, 2);
    const auto good = synthesize(cfg, ch);
    REQUIRE(verify_ia(cfg, ch, good).pass);

    auto bad_u = good;
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (Eigen::Index r = 0; r < bad_u.U[0].rows(); ++r) bad_u.U[0](r, 0) = {g(rng), g(rng)};
    const auto vu = verify_ia(cfg, ch, bad_u);
    CHECK_FALSE(vu.pass);
    CHECK(vu.zf_residual > 1e-3);

    auto dup_v = good;
    dup_v.V[1].col(1) = dup_v.V[1].col(0);
    const auto vv = verify_ia(cfg, ch, dup_v);
    CHECK_FALSE(vv.pass);
    CHECK(vv.v_ranks[1] == 2);
    CHECK_FALSE(vv.direct_rank_ok[1]);
  }

  TEST_CASE("verdict is invariant under unitary mixing of V") {
    for (const SystemConfig cfg : {SystemConfig{3, 1, 5, 7}, SystemConfig{3, 2, 11, 3}, SystemConfig{2, 1, 2, 2}}) {
      const auto ch = gen_channels(cfg, 4);
      auto t = synthesize(cfg, ch);
      const bool before = verify_ia(cfg, ch, t).pass;
      for (std::size_t j = 0; j < t.V.size(); ++j) t.V[j] = t.V[j] * random_unitary(t.V[j].cols(), 100 + j);
      CHECK(verify_ia(cfg, ch, t).pass == before);
      CHECK(before);
    }
  }

  TEST_CASE("refusals") {
    const auto ch = gen_channels({3, 2, 17, 5}, 0);
    CHECK_THROWS_AS(synthesize({3, 2, 17, 5}, ch), RefusedError);
    const auto ch2 = gen_channels({3, 2, 8, 2}, 0);
    CHECK_THROWS_AS(synthesize({3, 2, 8, 2}, ch2), RefusedError);
    CHECK_THROWS_AS(synthesize({3, 2, 8, 2}, ch), std::invalid_argument);
    const auto ext = SystemConfig{3, 2, 8, 2}.extended(3);
    const auto ch3 = gen_channels(ext, 0);
    const auto t = synthesize(ext, ch3);
    CHECK(t.d == 4);
    CHECK(verify_ia(ext, ch3, t).pass);
  }

  TEST_CASE("aligned-matrix cache is shared safely across threads") {
    const SystemConfig cfg{3, 1, 9, 11};
    std::vector<std::string> rendered(4);
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < rendered.size(); ++i) {
      pool.emplace_back([&, i] { rendered[i] = aligned_matrix_specs(cfg)[0].render(); });
    }
    for (auto& t : pool) t.join();
    for (const auto& r : rendered) CHECK(r == rendered[0]);
  }

  TEST_CASE("several seeds pass") {
    const SystemConfig cfg{2, 2, 3, 3};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto ext = cfg.extended(min_spatial_extension(cfg));
      const auto ch = gen_channels(ext, seed);
      CHECK(verify_ia(ext, ch, synthesize(ext, ch)).pass);
    }
  }
}
