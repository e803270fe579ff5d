#include "gtdesign/nested.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gtd {

namespace {

bool improves(double candidate, double incumbent) {
  return candidate < incumbent - kTieTolerance * std::max(1.0, std::abs(incumbent));
}

}  // namespace

NestedPolicy solve_nested(int N, const Prevalence& prev, NestedOptions options) {
  if (N < 0) throw std::invalid_argument("population size must be >= 0");

  NestedPolicy policy;
  policy.design_p = prev;
  policy.N = N;
  policy.H1.assign(N + 1, 0.0);
  policy.F1star.assign(N + 1, 0.0);
  policy.x_H.assign(N + 1, 0);
  policy.x_G.assign(N + 1, 0);
  if (N == 0) return policy;

  const double p = prev.p();
  std::vector<double> q_pow(N + 1);
  for (int i = 0; i <= N; ++i) q_pow[i] = pow_q(prev, i);

  auto& F = policy.F1star;
  for (int m = 2; m <= N; ++m) {
    const int last = options.halving_bound ? m / 2 : m - 1;
    double best = q_pow[1] * F[m - 1] + F[1];
    int arg = 1;
    for (int x = 2; x <= last; ++x) {
      const double candidate = q_pow[x] * F[m - x] + F[x];
      if (improves(candidate, best)) {
        best = candidate;
        arg = x;
      }
    }
    F[m] = one_minus_pow_q(prev, m) / p + best;
    policy.x_G[m] = arg;
  }

  auto& H = policy.H1;
  H[1] = 1.0;
  policy.x_H[1] = 1;
  for (int n = 2; n <= N; ++n) {
    // tail = sum_{i=1}^{x} q^(i-1) H(n - i), grown as x increases.
    double tail = 0.0;
    double best = 0.0;
    int arg = 0;
    for (int x = 1; x <= n; ++x) {
      tail += q_pow[x - 1] * H[n - x];
      const double candidate = q_pow[x] * H[n - x] + p * (F[x] + tail);
      if (arg == 0 || improves(candidate, best)) {
        best = candidate;
        arg = x;
      }
    }
    H[n] = 1.0 + best;
    policy.x_H[n] = arg;
  }
  return policy;
}

double expected_tests_nested(int N, const Prevalence& prev) {
  return solve_nested(N, prev).H1.at(N);
}

NextAction next_action(const NestedPolicy& policy, const GTState& state) {
  using Kind = NextAction::Kind;
  if (const auto* h = std::get_if<HState>(&state)) {
    if (h->n < 0 || h->n > policy.N) {
      throw InvalidState("H-state size " + std::to_string(h->n) + " outside policy range");
    }
    if (h->n == 0) return {Kind::Done, 0};
    return {Kind::TestBinomial, policy.x_H[h->n]};
  }
  const auto& g = std::get<GState>(state);
  if (g.m < 1 || g.m > g.n || g.n > policy.N) {
    throw InvalidState("G-state (" + std::to_string(g.m) + ", " + std::to_string(g.n) +
                       ") outside policy range");
  }
  if (g.m == 1) return {Kind::DeclarePositive, 1};
  return {Kind::TestDefective, policy.x_G[g.m]};
}

}  // namespace gtd
