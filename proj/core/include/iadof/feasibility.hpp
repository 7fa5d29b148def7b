#pragma once

#include "iadof/dof_bounds.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace iadof {

enum class LinearVerdict { Feasible, Infeasible, ConjecturedFeasible };
enum class AsymptoticVerdict { Feasible, Infeasible };

std::string to_string(LinearVerdict v);
std::string to_string(AsymptoticVerdict v);

struct BindingPair {
  Side side = Side::A;
  int n = 0;
  BigInt p;
  BigInt q;
  Rat bound;  // max{pM, qN} / (pK + q)
};

struct FeasibilityVerdict {
  RegionClass region;
  LinearVerdict linear = LinearVerdict::Infeasible;
  AsymptoticVerdict asymptotic = AsymptoticVerdict::Infeasible;
  std::optional<BindingPair> binding_pair;
  bool proper_holds = false;
};

struct FeasibilityOptions {
  // Test every pair up to max_pairs instead of the region index plus one.
  bool check_all_pairs = false;
  int max_pairs = 64;
};

FeasibilityVerdict feasible_linear(const SystemConfig& cfg, const Rat& d,
                                   const FeasibilityOptions& opt = {});
AsymptoticVerdict feasible_asymptotic(const SystemConfig& cfg, const Rat& d);

// Smallest m with m*d_quantity and the per-aligned-matrix column count integral.
std::int64_t min_spatial_extension(const SystemConfig& cfg);

}  // namespace iadof
