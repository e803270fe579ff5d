#pragma once

// Optimal nested procedure R1: an O(N^2) dynamic program over the
// binomial-set (H) and defective-set (G) situations.

#include <variant>
#include <vector>

#include "gtdesign/core.hpp"

namespace gtd {

/// Value and decision tables of the optimal nested procedure.
///
/// All arrays have length N + 1 and are indexed by set size; unused low
/// slots are padding (H1[0] = 0, F1star[0] = 0, x_H[0] = 0, x_G[0..1] = 0).
/// x_H[1] = 1: a lone binomial unit is tested on its own.
struct NestedPolicy {
  Prevalence design_p{0.5};
  int N = 0;
  std::vector<double> H1;      // expected tests to classify a binomial set of size n
  std::vector<double> F1star;  // normalized cost to break down a defective set of size m
  std::vector<int> x_H;        // first test size in an H-situation with n units
  std::vector<int> x_G;        // subset size tested from a defective set of size m
};

struct NestedOptions {
  /// Restrict the defective-set split to x <= floor(m/2). Disabling it scans
  /// 1..m-1 and exists to check that the restriction is harmless.
  bool halving_bound = true;
};

NestedPolicy solve_nested(int N, const Prevalence& prev, NestedOptions options = {});

/// H1(N) of the optimal nested procedure.
double expected_tests_nested(int N, const Prevalence& prev);

/// Only a binomial set of n units remains.
struct HState {
  int n = 0;
};

/// A defective set of m units plus n - m binomial units remain.
struct GState {
  int m = 1;
  int n = 1;
};

using GTState = std::variant<HState, GState>;

struct NextAction {
  enum class Kind {
    Done,             // nothing left to classify
    TestBinomial,     // pool `subset_size` fresh units from the binomial set
    TestDefective,    // pool `subset_size` units from the defective set
    DeclarePositive,  // lone defective-set unit is positive; no test needed
  };
  Kind kind = Kind::Done;
  int subset_size = 0;
};

/// Decision of the policy in the given state. Throws InvalidState when the
/// state is malformed or larger than the policy's tables.
NextAction next_action(const NestedPolicy& policy, const GTState& state);

}  // namespace gtd
