#include "gtdesign/core.hpp"

#include <cmath>
#include <string>

namespace gtd {

Prevalence::Prevalence(double p) : p_(p), q_(1.0 - p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("prevalence must lie strictly inside (0, 1), got " +
                                std::to_string(p));
  }
}

std::string_view to_string(ProcedureKind kind) noexcept {
  switch (kind) {
    case ProcedureKind::D:
      return "D";
    case ProcedureKind::DPrime:
      return "Dprime";
    case ProcedureKind::Sterrett:
      return "S";
    case ProcedureKind::NestedR1:
      return "R1";
  }
  return "?";
}

ProcedureKind parse_procedure(std::string_view name) {
  if (name == "D") return ProcedureKind::D;
  if (name == "Dprime" || name == "D'" || name == "DPrime") return ProcedureKind::DPrime;
  if (name == "S" || name == "Sterrett") return ProcedureKind::Sterrett;
  if (name == "R1" || name == "nested" || name == "NestedR1") return ProcedureKind::NestedR1;
  throw std::invalid_argument("unknown procedure '" + std::string(name) + "'");
}

const CutoffConstants& cutoffs() noexcept {
  static const CutoffConstants constants{
      (3.0 - std::sqrt(5.0)) / 2.0,
      1.0 - std::pow(3.0, -1.0 / 3.0),
      1.0 - 1.0 / std::sqrt(2.0),
  };
  return constants;
}

double pow_q(const Prevalence& prev, double k) noexcept {
  return std::exp(k * std::log1p(-prev.p()));
}

double one_minus_pow_q(const Prevalence& prev, double k) noexcept {
  return -std::expm1(k * std::log1p(-prev.p()));
}

namespace {

void require_positive(int k) {
  if (k < 1) {
    throw std::invalid_argument("group size must be >= 1, got " + std::to_string(k));
  }
}

GroupCost make_cost(int k, double per_person) {
  return GroupCost{per_person, per_person * k, k};
}

}  // namespace

GroupCost expected_per_person_D(int k, const Prevalence& prev) {
  require_positive(k);
  if (k == 1) return make_cost(1, 1.0);
  return make_cost(k, one_minus_pow_q(prev, k) + 1.0 / k);
}

GroupCost expected_per_person_DPrime(int k, const Prevalence& prev) {
  require_positive(k);
  if (k == 1) return make_cost(1, 1.0);
  const double inv_k = 1.0 / k;
  return make_cost(k, one_minus_pow_q(prev, k) + inv_k - inv_k * prev.p() * pow_q(prev, k - 1));
}

GroupCost expected_per_person_S(int k, const Prevalence& prev) {
  require_positive(k);
  if (k == 1) return make_cost(1, 1.0);
  // (1 - q^(k+1)) / (1 - q) is the geometric sum 1 + q + ... + q^k.
  const double geometric = one_minus_pow_q(prev, k + 1.0) / prev.p();
  const double total = 2.0 * k - (k - 2.0) * prev.q() - geometric;
  return make_cost(k, total / k);
}

GroupCost expected_per_person_S_recursive(int k, const Prevalence& prev) {
  require_positive(k);
  const double q = prev.q();
  double total = 1.0;
  double q_pow = q;  // q^(j+1) for the step j -> j+1
  for (int j = 1; j < k; ++j) {
    q_pow *= q;
    total += 2.0 - q - q_pow;
  }
  return make_cost(k, total / k);
}

void require_fixed_size_procedure(ProcedureKind kind) {
  if (kind == ProcedureKind::NestedR1) {
    throw UnsupportedProcedure("procedure R1 has no fixed group size form");
  }
}

GroupCost group_cost(ProcedureKind kind, int k, const Prevalence& prev) {
  switch (kind) {
    case ProcedureKind::D:
      return expected_per_person_D(k, prev);
    case ProcedureKind::DPrime:
      return expected_per_person_DPrime(k, prev);
    case ProcedureKind::Sterrett:
      return expected_per_person_S(k, prev);
    case ProcedureKind::NestedR1:
      break;
  }
  require_fixed_size_procedure(kind);
  return {};
}

double per_person_cost_at_zero(ProcedureKind kind, int k) {
  require_fixed_size_procedure(kind);
  require_positive(k);
  return k == 1 ? 1.0 : 1.0 / k;
}

}  // namespace gtd
