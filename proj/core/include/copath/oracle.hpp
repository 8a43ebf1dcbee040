#pragma once

#include <cstdint>

#include "copath/model.hpp"

namespace copath {

inline constexpr std::uint64_t kDefaultOracleBudget = 10'000'000;

struct OracleResult {
  Score optimum = 0;
  Solution witness;
  std::uint64_t explored = 0;
};

/// Number of (path tuple, choice, delay vector) assignments the oracle would
/// evaluate. Saturates at UINT64_MAX.
std::uint64_t oracle_space(const Instance& instance);

/// Exhaustive maximisation over every per-graph path, every resource choice
/// on the executed nodes, and every integer edge delay within its window.
/// The first maximal assignment in enumeration order is the witness.
/// Throws BudgetExceeded when oracle_space exceeds `budget`.
OracleResult oracle_solve(const Instance& instance,
                          std::uint64_t budget = kDefaultOracleBudget);

bool oracle_agrees(const Instance& instance, const Solution& solution,
                   std::uint64_t budget = kDefaultOracleBudget);

}  // namespace copath
