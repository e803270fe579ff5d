#pragma once

// Minimax group size when only an upper bound U on the prevalence is known,
// and the robustness comparison against nested policies designed at U, U/2.

#include <utility>
#include <vector>

#include "gtdesign/core.hpp"

namespace gtd {

/// L_A(k, p) = E_A(k, p) - E_A(k*_A(p), p).
double regret(ProcedureKind kind, int k, const Prevalence& prev);

struct RegretCurve {
  int k = 1;
  std::vector<std::pair<double, double>> samples;  // (p, regret)
};

/// Prevalence grid {step, 2 step, ..., U}; U is always the last point.
std::vector<double> prevalence_grid(double U, double grid_step);

RegretCurve regret_curve(ProcedureKind kind, int k, double U, double grid_step);

struct MinimaxOptions {
  /// Also take the limit p -> 0+ of the regret, E_A(k, 0+) - 0, into the
  /// supremum. The regret of small groups keeps rising as p -> 0, so a grid
  /// alone misses the supremum over (0, U].
  bool include_zero_limit = true;
};

struct MinimaxResult {
  int k_star_star = 1;
  double worst_regret = 0.0;
  double U = 0.0;
  ProcedureKind procedure = ProcedureKind::D;
  double grid_step = 0.0;
  std::vector<double> worst_regret_by_k;  // index k - 1, k = 1..k_cap
};

/// Candidate sizes 1..max(200, 4 ceil(U^-1/2)).
int minimax_k_cap(double U);

/// argmin_k sup_{p in (0, U]} L_A(k, p); ties go to the smaller k.
MinimaxResult minimax_group_size(ProcedureKind kind, double U, double grid_step,
                                 MinimaxOptions options = {});

struct RobustnessRow {
  double p = 0.0;
  double e_D = 0.0;       // E_D(k**_D, p), per person
  double e_DPrime = 0.0;  // E_D'(k**_D', p)
  double e_S = 0.0;       // E_S(k**_S, p)
  double h1_design_U = 0.0;      // nested policy designed at U, total over N
  double h1_design_half_U = 0.0;  // nested policy designed at U/2
};

struct RobustnessTable {
  double U = 0.0;
  int N = 0;
  double grid_step = 0.0;
  int k_D = 1;
  int k_DPrime = 1;
  int k_S = 1;
  std::vector<RobustnessRow> rows;
};

RobustnessTable robustness_table(double U, const std::vector<double>& p_list, int N,
                                 double grid_step = 1e-4, MinimaxOptions options = {});

}  // namespace gtd
