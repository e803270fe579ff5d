#pragma once

// Optimal common group size k*_A(p) for an infinite population.

#include <optional>

#include "gtdesign/core.hpp"

namespace gtd {

struct OptimalSize {
  int k_star = 1;
  double cost_per_person = 1.0;
  std::optional<int> co_optimal;  // larger size tied with k_star, if any
};

/// For p < p_D the optimum is 1 + floor(p^-1/2) or 2 + floor(p^-1/2);
/// otherwise individual testing.
OptimalSize optimal_size_D(const Prevalence& prev);

/// First k satisfying E(k) <= E(k-1) and E(k) < E(k+1); 1 when p >= p_U.
OptimalSize optimal_size_DPrime(const Prevalence& prev);

/// Same sequential scan as D' (E_S is unimodal in k for p < p_U).
OptimalSize optimal_size_S(const Prevalence& prev);

OptimalSize optimal_size(ProcedureKind kind, const Prevalence& prev);

/// True iff p >= (3 - sqrt 5) / 2, where no pooling scheme beats one-by-one testing.
bool individual_testing_optimal(const Prevalence& prev) noexcept;

/// Largest k any scan may visit: max(1000, 4 * ceil(p^-1/2)).
int size_search_bound(const Prevalence& prev);

/// floor(p^-1/2) computed without floating-point drift at perfect squares.
int floor_inverse_sqrt(const Prevalence& prev);

}  // namespace gtd
