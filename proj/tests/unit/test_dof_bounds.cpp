#include "iadof/dof_bounds.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace iadof;

namespace {

Rat R(std::int64_t a, std::int64_t b = 1) { return Rat(BigInt(a), BigInt(b)); }
Rat R(const oracle::Q& q) { return Rat(q); }

}  // namespace

TEST_SUITE("dof_bounds") {
  TEST_CASE("decomposition and proper bounds") {
    CHECK(dof_decomposition({3, 1, 5, 7}) == R(35, 12));
    CHECK(dof_decomposition({4, 1, 9, 9}) == R(9, 2));
    CHECK(dof_decomposition({3, 2, 8, 2}) == R(4, 3));
    CHECK(dof_proper({3, 1, 5, 7}) == R(3));
    CHECK(dof_proper({3, 2, 11, 3}) == R(2));
    CHECK(dof_proper({2, 1, 1, 1}) == R(2, 3));
    CHECK_THROWS_AS(dof_proper({1, 1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(dof_decomposition({2, 1, 0, 1}), std::invalid_argument);
  }

  TEST_CASE("region classification examples") {
    auto a = classify_region({3, 1, 5, 7});
    CHECK(a.region == Region::IIB);
    CHECK(a.n == 3);
    CHECK(a.subcase == Subcase::MLimited);
    CHECK(a.label() == "II-B(3)");
    CHECK(classify_region({3, 2, 17, 5}).region == Region::I);
    auto c = classify_region({3, 2, 9, 2});
    CHECK(c.region == Region::IIA);
    CHECK(c.n == 1);
    CHECK(classify_region({3, 2, 24, 6}).subcase == Subcase::NLimited);
    CHECK(classify_region({3, 2, 12, 2}).subcase == Subcase::MLimited);
    CHECK(classify_region({3, 2, 11, 3}).subcase == Subcase::MLimited);
    CHECK(classify_region({3, 2, 7, 2}).subcase == Subcase::NLimited);
  }

  TEST_CASE("boundary ratios close the II-A bracket on the left") {
    // M/N = C_2^A = 7/2 for G=3, K=2
    auto rc = classify_region({3, 2, 7, 2});
    CHECK(rc.region == Region::IIA);
    CHECK(rc.n == 2);
    // M/N = C_1^B = 1/2 closes II-B(1) on the right
    auto rb = classify_region({3, 2, 1, 2});
    CHECK(rb.region == Region::IIB);
    CHECK(rb.n == 1);
  }

  TEST_CASE("limit points of rational limits") {
    for (std::int64_t N = 1; N <= 10; ++N) {
      auto a = classify_region({3, 1, N, N});
      CHECK(a.limit_point);
      CHECK(a.region == Region::IIA);
      CHECK_FALSE(a.n.has_value());
      CHECK(dof_quantity({3, 1, N, N}) == R(N, 2));
      auto b = classify_region({2, 4, 2 * N, N});
      CHECK(b.limit_point);
      CHECK(dof_quantity({2, 4, 2 * N, N}) == dof_decomposition({2, 4, 2 * N, N}));
      CHECK(dof_quantity({2, 4, 2 * N, N}) == dof_proper({2, 4, 2 * N, N}));
    }
    CHECK_FALSE(classify_region({3, 1, 5, 7}).limit_point);
  }

  TEST_CASE("quantity bound examples") {
    CHECK(dof_quantity({3, 1, 5, 7}) == R(3));
    CHECK(dof_quantity({2, 1, 4, 2}) == R(2));
    CHECK(dof_quantity({3, 2, 11, 3}) == R(2));
    CHECK(dof_quantity({3, 2, 7, 2}) == R(14, 11));
    CHECK(dof_quantity({3, 2, 8, 2}) == R(4, 3));
    CHECK_FALSE(dof_quantity({3, 2, 17, 5}).has_value());
  }

  TEST_CASE("upper bound reports") {
    auto r1 = dof_upper({3, 2, 17, 5});
    CHECK(r1.d_upper == R(85, 27));
    CHECK(r1.achievable_by == Achievability::AsymptoticOnly);
    auto r2 = dof_upper({3, 1, 5, 7});
    CHECK(r2.d_upper == R(3));
    CHECK(r2.achievable_by == Achievability::Linear);
    auto r3 = dof_upper({2, 2, 3, 3});
    CHECK(r3.d_upper == R(oracle::closed_g2k2(3, 3)));
    CHECK(r3.d_upper == R(1));
  }

  TEST_CASE("quantity bound equals the pair-minimum oracle in Region II") {
    for (std::int64_t G = 2; G <= 4; ++G) {
      for (std::int64_t K = 1; K <= 3; ++K) {
        for (std::int64_t M = 1; M <= 18; ++M) {
          for (std::int64_t N = 1; N <= 18; ++N) {
            const SystemConfig cfg{G, K, M, N};
            const auto dq = dof_quantity(cfg);
            CHECK(dq.has_value() == !oracle::region_one(G, K, M, N));
            if (dq && !classify_region(cfg).limit_point) {
              CHECK(*dq == R(oracle::pair_bound(G, K, M, N)));
            }
          }
        }
      }
    }
  }

  TEST_CASE("closed-form special cases") {
    for (std::int64_t M = 1; M <= 20; ++M) {
      for (std::int64_t N = 1; N <= 20; ++N) {
        CHECK(dof_quantity({2, 1, M, N}) == R(oracle::closed_g2k1(M, N)));
        CHECK(dof_quantity({3, 1, M, N}) == R(oracle::closed_g3k1(M, N)));
        CHECK(dof_quantity({2, 2, M, N}) == R(oracle::closed_g2k2(M, N)));
      }
    }
  }

  TEST_CASE("bound ordering") {
    for (std::int64_t G : {2, 3, 4}) {
      for (std::int64_t K : {1, 2, 3}) {
        for (std::int64_t M = 1; M <= 15; ++M) {
          for (std::int64_t N = 1; N <= 15; ++N) {
            const auto r = dof_upper({G, K, M, N});
            if (r.region.region_two()) {
              CHECK(r.d_decom <= *r.d_quantity);
              CHECK(*r.d_quantity <= r.d_proper);
            } else {
              CHECK(r.d_proper < r.d_decom);
            }
          }
        }
      }
    }
  }

  TEST_CASE("partition is total and the II-A/II-B formulas agree where both brackets admit") {
    for (std::int64_t G = 2; G <= 5; ++G) {
      for (std::int64_t K = 1; K <= 4; ++K) {
        const auto cb = c_sequence(G, K, Side::B, 40);
        for (std::int64_t M = 1; M <= 12; ++M) {
          for (std::int64_t N = 1; N <= 12; ++N) {
            const SystemConfig cfg{G, K, M, N};
            const auto rc = classify_region(cfg);
            if (!rc.region_two() || rc.limit_point) continue;
            const Rat r = cfg.ratio();
            for (std::size_t n = 1; n < cb.size(); ++n) {
              if (cb[n - 1] < r && r <= cb[n]) {
                RegionClass alt;
                alt.region = Region::IIB;
                alt.n = static_cast<int>(n);
                const auto t = quantity_terms(cfg, alt);
                CHECK(min(t.m_term, t.n_term) == *dof_quantity(cfg));
              }
            }
          }
        }
      }
    }
  }
}
