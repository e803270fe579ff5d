#include "gtdesign/robustness.hpp"

#include <algorithm>
#include <cmath>

#include "gtdesign/eval.hpp"
#include "gtdesign/nested.hpp"
#include "gtdesign/size_opt.hpp"

namespace gtd {

double regret(ProcedureKind kind, int k, const Prevalence& prev) {
  require_fixed_size_procedure(kind);
  return group_cost(kind, k, prev).per_person - optimal_size(kind, prev).cost_per_person;
}

std::vector<double> prevalence_grid(double U, double grid_step) {
  if (!(U > 0.0 && U < 1.0)) throw std::invalid_argument("U must lie in (0, 1)");
  if (!(grid_step > 0.0 && grid_step <= U / 10.0)) {
    throw std::invalid_argument("grid step must lie in (0, U/10]");
  }
  std::vector<double> grid;
  const auto points = static_cast<long>(std::floor(U / grid_step + 1e-9));
  grid.reserve(points + 1);
  for (long i = 1; i <= points; ++i) grid.push_back(std::min(U, static_cast<double>(i) * grid_step));
  if (grid.empty() || std::abs(grid.back() - U) > 1e-12 * U) {
    grid.push_back(U);
  } else {
    grid.back() = U;
  }
  return grid;
}

RegretCurve regret_curve(ProcedureKind kind, int k, double U, double grid_step) {
  RegretCurve curve{k, {}};
  for (double p : prevalence_grid(U, grid_step)) {
    curve.samples.emplace_back(p, regret(kind, k, Prevalence(p)));
  }
  return curve;
}

int minimax_k_cap(double U) {
  return std::max(200, 4 * static_cast<int>(std::ceil(1.0 / std::sqrt(U))));
}

MinimaxResult minimax_group_size(ProcedureKind kind, double U, double grid_step,
                                 MinimaxOptions options) {
  require_fixed_size_procedure(kind);
  const std::vector<double> grid = prevalence_grid(U, grid_step);
  const int k_cap = minimax_k_cap(U);

  std::vector<double> worst(k_cap, 0.0);
  if (options.include_zero_limit) {
    // E_A(k*(p), p) -> 0 as p -> 0+, so the limiting regret is E_A(k, 0+).
    for (int k = 1; k <= k_cap; ++k) worst[k - 1] = per_person_cost_at_zero(kind, k);
  }
  for (double p : grid) {
    const Prevalence prev(p);
    const double optimum = optimal_size(kind, prev).cost_per_person;
    for (int k = 1; k <= k_cap; ++k) {
      const double loss = group_cost(kind, k, prev).per_person - optimum;
      worst[k - 1] = std::max(worst[k - 1], loss);
    }
  }

  MinimaxResult result;
  result.U = U;
  result.procedure = kind;
  result.grid_step = grid_step;
  result.k_star_star = 1;
  result.worst_regret = worst[0];
  for (int k = 2; k <= k_cap; ++k) {
    if (worst[k - 1] < result.worst_regret - kTieTolerance) {
      result.worst_regret = worst[k - 1];
      result.k_star_star = k;
    }
  }
  result.worst_regret_by_k = std::move(worst);
  return result;
}

RobustnessTable robustness_table(double U, const std::vector<double>& p_list, int N,
                                 double grid_step, MinimaxOptions options) {
  RobustnessTable table;
  table.U = U;
  table.N = N;
  table.grid_step = grid_step;
  table.k_D = minimax_group_size(ProcedureKind::D, U, grid_step, options).k_star_star;
  table.k_DPrime = minimax_group_size(ProcedureKind::DPrime, U, grid_step, options).k_star_star;
  table.k_S = minimax_group_size(ProcedureKind::Sterrett, U, grid_step, options).k_star_star;

  const NestedPolicy at_U = solve_nested(N, Prevalence(U));
  const NestedPolicy at_half_U = solve_nested(N, Prevalence(U / 2.0));
  for (double p : p_list) {
    const Prevalence truth(p);
    table.rows.push_back(RobustnessRow{
        p,
        expected_per_person_D(table.k_D, truth).per_person,
        expected_per_person_DPrime(table.k_DPrime, truth).per_person,
        expected_per_person_S(table.k_S, truth).per_person,
        evaluate_policy_mismatch(at_U, truth),
        evaluate_policy_mismatch(at_half_U, truth),
    });
  }
  return table;
}

}  // namespace gtd
