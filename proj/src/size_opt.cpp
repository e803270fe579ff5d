#include "gtdesign/size_opt.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace gtd {

namespace {

#ifndef NDEBUG
int brute_force_argmin(ProcedureKind kind, const Prevalence& prev, int upper) {
  int best_k = 1;
  double best = 1.0;
  for (int k = 2; k <= upper; ++k) {
    const double cost = group_cost(kind, k, prev).per_person;
    if (cost < best - kTieTolerance) {
      best = cost;
      best_k = k;
    }
  }
  return best_k;
}
#endif

OptimalSize individual() { return OptimalSize{1, 1.0, std::nullopt}; }

// Smallest k >= 2 with E(k) <= E(k-1) and E(k) < E(k+1). When E(k) ties
// E(k-1) the smaller size is reported and the larger kept as co-optimal.
OptimalSize sequential_scan(ProcedureKind kind, const Prevalence& prev) {
  const int bound = size_search_bound(prev);
  double prev_cost = 1.0;
  double cost = group_cost(kind, 2, prev).per_person;
  for (int k = 2; k < bound; ++k) {
    const double next_cost = group_cost(kind, k + 1, prev).per_person;
    if (cost <= prev_cost && cost < next_cost) {
      OptimalSize result{k, cost, std::nullopt};
      if (std::abs(cost - prev_cost) <= kTieTolerance) {
        result = OptimalSize{k - 1, prev_cost, k};
      }
      if (result.cost_per_person >= 1.0) return individual();
      return result;
    }
    prev_cost = cost;
    cost = next_cost;
  }
  throw std::logic_error("group size scan exceeded its search bound");
}

}  // namespace

bool individual_testing_optimal(const Prevalence& prev) noexcept {
  return prev.p() >= cutoffs().p_U;
}

int size_search_bound(const Prevalence& prev) {
  const double root = std::ceil(1.0 / std::sqrt(prev.p()));
  return static_cast<int>(std::max(1000.0, 4.0 * root));
}

int floor_inverse_sqrt(const Prevalence& prev) {
  auto r = static_cast<long long>(std::floor(1.0 / std::sqrt(prev.p())));
  // r is the largest integer with r^2 * p <= 1.
  while (static_cast<double>(r + 1) * static_cast<double>(r + 1) * prev.p() <= 1.0) ++r;
  while (r > 0 && static_cast<double>(r) * static_cast<double>(r) * prev.p() > 1.0) --r;
  return static_cast<int>(r);
}

OptimalSize optimal_size_D(const Prevalence& prev) {
  if (prev.p() >= cutoffs().p_D) return individual();
  const int base = floor_inverse_sqrt(prev);
  const int lo = base + 1;
  const int hi = base + 2;
  const double cost_lo = expected_per_person_D(lo, prev).per_person;
  const double cost_hi = expected_per_person_D(hi, prev).per_person;

  OptimalSize result;
  if (std::abs(cost_lo - cost_hi) <= kTieTolerance) {
    result = OptimalSize{lo, cost_lo, hi};
  } else if (cost_lo < cost_hi) {
    result = OptimalSize{lo, cost_lo, std::nullopt};
  } else {
    result = OptimalSize{hi, cost_hi, std::nullopt};
  }
  if (result.cost_per_person >= 1.0) return individual();
#ifndef NDEBUG
  const int upper = 4 + static_cast<int>(std::ceil(1.0 / std::sqrt(prev.p())));
  assert(result.co_optimal || result.k_star == brute_force_argmin(ProcedureKind::D, prev, upper));
#endif
  return result;
}

OptimalSize optimal_size_DPrime(const Prevalence& prev) {
  if (individual_testing_optimal(prev)) return individual();
  return sequential_scan(ProcedureKind::DPrime, prev);
}

OptimalSize optimal_size_S(const Prevalence& prev) {
  if (individual_testing_optimal(prev)) return individual();
  OptimalSize result = sequential_scan(ProcedureKind::Sterrett, prev);
#ifndef NDEBUG
  // Empirical bracket floor(sqrt(2/p)) .. floor(sqrt(2/p)) + 2.
  const int root = static_cast<int>(std::floor(std::sqrt(2.0 / prev.p())));
  assert(result.k_star >= root && result.k_star <= root + 2);
#endif
  return result;
}

OptimalSize optimal_size(ProcedureKind kind, const Prevalence& prev) {
  switch (kind) {
    case ProcedureKind::D:
      return optimal_size_D(prev);
    case ProcedureKind::DPrime:
      return optimal_size_DPrime(prev);
    case ProcedureKind::Sterrett:
      return optimal_size_S(prev);
    case ProcedureKind::NestedR1:
      break;
  }
  require_fixed_size_procedure(kind);
  return {};
}

}  // namespace gtd
