#pragma once

// Optimal partition of a finite population into pools, for D, D' and S.

#include <string>
#include <vector>

#include "gtdesign/core.hpp"

namespace gtd {

struct Partition {
  ProcedureKind procedure = ProcedureKind::Sterrett;
  int N = 0;
  Prevalence p{0.5};
  std::vector<int> sizes;  // sorted descending
  double total_expected_tests = 0.0;
};

/// Sum of h_A(size) over the given sizes.
double partition_cost(ProcedureKind kind, const std::vector<int>& sizes, const Prevalence& prev);

/// Builds a Partition from sizes (sorted descending, cost recomputed).
Partition make_partition(ProcedureKind kind, std::vector<int> sizes, const Prevalence& prev);

/// Exact O(N^2) dynamic program H(k) = min_{0<=x<k} H(x) + h(k - x).
/// Among tied split points the smallest x wins.
Partition optimal_partition_dp(ProcedureKind kind, int N, const Prevalence& prev);

/// Two-candidate construction from the infinite-population optimum a:
/// distribute the remainder over s = floor(N/a) groups, or over s + 1 groups.
struct DirectConstruction {
  enum class Choice { OptionI, OptionII };

  int a = 1;
  int s = 0;
  int theta = 0;
  Partition option_i;
  Partition option_ii;
  Choice chosen = Choice::OptionI;

  const Partition& best() const noexcept {
    return chosen == Choice::OptionI ? option_i : option_ii;
  }
};

DirectConstruction optimal_partition_direct(ProcedureKind kind, int N, const Prevalence& prev);

/// Near-equal split of N into `groups` pools (sizes differ by at most one).
std::vector<int> balanced_sizes(int N, int groups);

/// Applies (+1, -1) moves between a largest and a smallest group until all
/// sizes differ by at most one.
Partition balance_improve(ProcedureKind kind, std::vector<int> sizes, const Prevalence& prev);

/// "s x a" notation: counts per size, ascending by size, e.g. "5×6, 10×7".
std::string format_group_counts(const std::vector<int>& sizes);

/// Brace notation in stored (descending) order, e.g. "{5,4,4}".
std::string format_sizes(const std::vector<int>& sizes);

}  // namespace gtd
