#pragma once

// Independent evaluation of pooling procedures: executors on concrete
// infection vectors, exact enumeration over all 2^N vectors, Monte Carlo
// simulation, and analytic evaluation of a nested policy under a
// prevalence other than the one it was designed for.

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gtdesign/core.hpp"
#include "gtdesign/nested.hpp"
#include "gtdesign/partition.hpp"

namespace gtd {

struct OutcomeVector {
  std::vector<std::uint8_t> bits;  // 1 = infected

  std::size_t size() const noexcept { return bits.size(); }

  /// Unit i is infected iff bit i of mask is set.
  static OutcomeVector from_mask(int N, std::uint64_t mask);
};

using Design = std::variant<Partition, NestedPolicy>;

int design_size(const Design& design) noexcept;
std::string describe_design(ProcedureKind kind, const Design& design);

// Single-group executors; each returns the number of tests performed.
int run_group_D(std::span<const std::uint8_t> group);
int run_group_DPrime(std::span<const std::uint8_t> group);
int run_group_S(std::span<const std::uint8_t> group);

/// Follows next_action. Units are always drawn lowest index first.
int run_nested(const NestedPolicy& policy, std::span<const std::uint8_t> outcome);

/// Runs the procedure on one outcome. Partition groups take consecutive
/// units in the partition's stored order. Throws std::invalid_argument on a
/// length mismatch or when the design does not fit the procedure.
int run_procedure(ProcedureKind kind, const Design& design, const OutcomeVector& outcome);

enum class EvalMethod { Exact, MonteCarlo, Analytic };

struct EvalReport {
  double expected_tests = 0.0;
  EvalMethod method = EvalMethod::Exact;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  double std_error = 0.0;  // sample sd / sqrt(replicates); zero unless Monte Carlo
  std::string design;
};

inline constexpr int kDefaultEnumerationCap = 20;

/// Probability-weighted sum over all 2^N outcomes. Throws CapacityExceeded
/// when N exceeds the cap.
EvalReport exact_expected_tests(ProcedureKind kind, const Design& design, const Prevalence& prev,
                                int cap = kDefaultEnumerationCap);

/// SplitMix64 generator. Replicate r of a run seeded with s draws from its
/// own stream, started at replicate_stream_seed(s, r), so results do not
/// depend on how replicates are scheduled.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  std::uint64_t next() noexcept;
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

std::uint64_t replicate_stream_seed(std::uint64_t seed, std::uint64_t replicate) noexcept;

EvalReport monte_carlo_expected_tests(ProcedureKind kind, const Design& design,
                                      const Prevalence& prev, std::size_t replicates,
                                      std::uint64_t seed);

/// Expected tests of the policy's fixed decisions when the true prevalence is
/// p_true. Equals policy.H1[N] when p_true is the design prevalence.
double evaluate_policy_mismatch(const NestedPolicy& policy, const Prevalence& p_true);

}  // namespace gtd
