#pragma once

#include "iadof/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace iadof {

enum class Side { A, B };

std::string to_string(Side s);

struct PQPair {
  BigInt p;
  BigInt q;
  int n = -1;
};

// K when n is even, 1 when n is odd.
std::int64_t kbar(std::int64_t K, std::int64_t n);

// Pairs for n = -1, 0, 1, ... up to n_max, truncated before the first pair
// with a negative entry. Element i holds index n = i - 1.
std::vector<PQPair> pq_sequence(std::int64_t G, std::int64_t K, Side side, int n_max);

// C_0 .. C_{n_max} (or fewer if the sequence is finite). Element i is C_i.
std::vector<Rat> c_sequence(std::int64_t G, std::int64_t K, Side side, int n_max);

// True when both C sequences are infinite, i.e. G >= 3 or K >= 4.
bool sequences_infinite(std::int64_t G, std::int64_t K);

double c_limit(std::int64_t G, std::int64_t K, Side side);

// D_n^A = (K + C_{n+1}^A) / (1 + K/C_n^A)
// D_n^B = (K + C_n^B) / (1 + K/C_{n+1}^B)
Rat d_boundary(std::int64_t G, std::int64_t K, Side side, int n);

}  // namespace iadof
