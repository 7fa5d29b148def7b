#pragma once

#include <stdexcept>
#include <string>

namespace iadof {

// Configuration outside a routine's domain (Region I, limit point, ...).
class RefusedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NonTerminatingChain : public RefusedError {
 public:
  NonTerminatingChain() : RefusedError("non-terminating (Region I)") {}
  explicit NonTerminatingChain(const std::string& what) : RefusedError(what) {}
};

// Numerical rank fell short during synthesis.
class RankDeficiencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SearchExhaustedError : public std::runtime_error {
 public:
  SearchExhaustedError(const std::string& what, int budget)
      : std::runtime_error(what), budget_(budget) {}
  int budget() const { return budget_; }

 private:
  int budget_;
};

}  // namespace iadof
