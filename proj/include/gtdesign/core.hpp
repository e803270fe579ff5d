#pragma once

// Shared domain types and the closed-form expected-cost formulas for the
// Dorfman (D), modified Dorfman (D') and Sterrett (S) pooling procedures.

#include <stdexcept>
#include <string>
#include <string_view>

namespace gtd {

/// Raised when an operation is asked for a procedure it has no form for,
/// e.g. a fixed group size cost for the optimal nested procedure.
class UnsupportedProcedure : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an exhaustive computation would exceed its state-space cap.
class CapacityExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Raised when a nested-procedure state lies outside a policy's tables.
class InvalidState : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Probability that a single unit is positive. Always strictly inside (0, 1).
class Prevalence {
 public:
  explicit Prevalence(double p);

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }

  friend bool operator==(const Prevalence&, const Prevalence&) = default;

 private:
  double p_;
  double q_;
};

enum class ProcedureKind { D, DPrime, Sterrett, NestedR1 };

std::string_view to_string(ProcedureKind kind) noexcept;

/// Accepts "D", "Dprime"/"D'", "S"/"Sterrett", "R1"/"nested" (case-sensitive).
ProcedureKind parse_procedure(std::string_view name);

/// Expected number of tests for one group of size k.
struct GroupCost {
  double per_person = 0.0;  // E_A(k, p)
  double total = 0.0;       // h_A(k) = k * E_A(k, p)
  int k = 1;
};

struct CutoffConstants {
  double p_U;             // individual-testing cutoff (3 - sqrt 5) / 2
  double p_D;             // Dorfman applicability limit 1 - 3^(-1/3)
  double pairwise_lower;  // 1 - 1/sqrt 2
};

const CutoffConstants& cutoffs() noexcept;

/// Costs closer than this are treated as tied.
inline constexpr double kTieTolerance = 1e-12;

// q^k and 1 - q^k evaluated through log1p/expm1 so that tiny p keeps full
// relative precision.
double pow_q(const Prevalence& prev, double k) noexcept;
double one_minus_pow_q(const Prevalence& prev, double k) noexcept;

GroupCost expected_per_person_D(int k, const Prevalence& prev);
GroupCost expected_per_person_DPrime(int k, const Prevalence& prev);
GroupCost expected_per_person_S(int k, const Prevalence& prev);

/// Sterrett cost from the recurrence E(k+1) = E(k) + 2 - q - q^(k+1),
/// E(1) = 1. Independent of the closed form; used to cross-check it.
GroupCost expected_per_person_S_recursive(int k, const Prevalence& prev);

/// Dispatch over D, D', S. Throws UnsupportedProcedure for NestedR1.
GroupCost group_cost(ProcedureKind kind, int k, const Prevalence& prev);

/// lim_{p -> 0+} E_A(k, p): 1 for k = 1, otherwise 1/k.
double per_person_cost_at_zero(ProcedureKind kind, int k);

void require_fixed_size_procedure(ProcedureKind kind);

}  // namespace gtd
