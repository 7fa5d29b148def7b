#pragma once

#include "iadof/rational.hpp"
#include "iadof/sequences.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace iadof {

struct SystemConfig {
  std::int64_t G = 2;
  std::int64_t K = 1;
  std::int64_t M = 1;
  std::int64_t N = 1;

  // Throws std::invalid_argument.
  void validate() const;
  Rat ratio() const { return Rat(BigInt(M), BigInt(N)); }
  // Spatial extension by m: M -> mM, N -> mN.
  SystemConfig extended(std::int64_t m) const;

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
  friend auto operator<=>(const SystemConfig&, const SystemConfig&) = default;
};

enum class Region { I, IIA, IIB };
enum class Subcase { MLimited, NLimited };
enum class Achievability { AsymptoticOnly, Linear };

std::string to_string(Region r);
std::string to_string(Subcase s);
std::string to_string(Achievability a);

struct RegionClass {
  Region region = Region::I;
  std::optional<int> n;
  std::optional<Subcase> subcase;
  // M/N equals the (rational) limit C_inf; only (G,K) = (3,1), (2,4).
  bool limit_point = false;

  bool region_two() const { return region != Region::I; }
  Side side() const { return region == Region::IIB ? Side::B : Side::A; }
  std::string label() const;  // "I", "II-A(3)", "II-B(2)", "II-A(limit)"
};

struct DoFReport {
  SystemConfig cfg;
  Rat d_decom;
  Rat d_proper;
  std::optional<Rat> d_quantity;
  Rat d_upper;
  RegionClass region;
  Achievability achievable_by = Achievability::AsymptoticOnly;
};

// The two terms of the quantity bound for a Region II class.
struct QuantityTerms {
  Rat m_term;   // M / (K + C)
  Rat n_term;   // N / (1 + K / C')
  Rat touch;    // D_{n-1}; M/N >= touch selects the M-limited subcase
};

Rat dof_decomposition(const SystemConfig& cfg);
Rat dof_proper(const SystemConfig& cfg);
RegionClass classify_region(const SystemConfig& cfg);
std::optional<Rat> dof_quantity(const SystemConfig& cfg);
DoFReport dof_upper(const SystemConfig& cfg);

// Requires a finite-index Region II class (not a limit point).
QuantityTerms quantity_terms(const SystemConfig& cfg, const RegionClass& rc);

}  // namespace iadof
