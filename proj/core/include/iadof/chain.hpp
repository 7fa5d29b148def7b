#pragma once

#include "iadof/dof_bounds.hpp"
#include "iadof/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace iadof {

struct ChainReport {
  Side side = Side::A;
  // |S_n| for n = -1, 0, 1, ..., length; element i holds index n = i - 1.
  std::vector<Rat> dims;
  int length = 0;
  // Maximal |G_m|, m = 1..length-1, at d = genie_bound_recursive(cfg).
  std::vector<Rat> genie_dims;
};

// Throws NonTerminatingChain for Region I and limit points.
ChainReport subspace_chain(const SystemConfig& cfg);

// Largest d admitted by the genie inequality system, by exact elimination.
Rat genie_bound_recursive(const SystemConfig& cfg);

struct GenieReport {
  Side side = Side::A;
  int length = 0;
  Rat d;
  // |G_m| for m = -1 .. length-1 (element i holds index m = i - 1);
  // m >= 1 entries are the maximal admissible values.
  std::vector<Rat> dims;
  // Slack of the chain constraint at each m = 1..length-1.
  std::vector<Rat> chain_slack;
  Rat terminal_slack;   // at m = length
  Rat subspace_slack;   // |S_{length-1}| - |G_{length-1}|
  bool feasible = true;
  // Set when d exceeds the bound: "chain(m=2)", "terminal", "subspace", "nonnegative(m=-1)".
  std::optional<std::string> first_violation;

  // Only the genie entries m = 1..length-1.
  std::vector<Rat> genies() const;
};

GenieReport genie_dims(const SystemConfig& cfg, const Rat& d);

}  // namespace iadof
