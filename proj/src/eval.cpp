#include "gtdesign/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gtd {

OutcomeVector OutcomeVector::from_mask(int N, std::uint64_t mask) {
  OutcomeVector out;
  out.bits.resize(N);
  for (int i = 0; i < N; ++i) out.bits[i] = static_cast<std::uint8_t>((mask >> i) & 1U);
  return out;
}

int design_size(const Design& design) noexcept {
  if (const auto* partition = std::get_if<Partition>(&design)) return partition->N;
  return std::get<NestedPolicy>(design).N;
}

std::string describe_design(ProcedureKind kind, const Design& design) {
  std::ostringstream out;
  out << to_string(kind) << ' ';
  if (const auto* partition = std::get_if<Partition>(&design)) {
    out << format_sizes(partition->sizes);
  } else {
    const auto& policy = std::get<NestedPolicy>(design);
    out << "policy(N=" << policy.N << ", design p=" << policy.design_p.p() << ')';
  }
  return out.str();
}

namespace {

bool any_positive(std::span<const std::uint8_t> units) {
  return std::any_of(units.begin(), units.end(), [](std::uint8_t b) { return b != 0; });
}

}  // namespace

int run_group_D(std::span<const std::uint8_t> group) {
  const int k = static_cast<int>(group.size());
  if (k <= 1) return k;
  return any_positive(group) ? k + 1 : 1;
}

int run_group_DPrime(std::span<const std::uint8_t> group) {
  const int k = static_cast<int>(group.size());
  if (k <= 1) return k;
  if (!any_positive(group)) return 1;
  // The last unit is inferred positive when the first k-1 retests are negative.
  return any_positive(group.first(k - 1)) ? k + 1 : k;
}

int run_group_S(std::span<const std::uint8_t> group) {
  const std::size_t k = group.size();
  int tests = 0;
  std::size_t start = 0;
  while (start < k) {
    ++tests;  // pool of the remaining units (a plain test when only one is left)
    if (k - start == 1 || !any_positive(group.subspan(start))) break;
    // One-by-one until the first positive; the last unit never needs a test.
    std::size_t i = start;
    for (; i + 1 < k; ++i) {
      ++tests;
      if (group[i]) break;
    }
    start = i + 1;
  }
  return tests;
}

int run_nested(const NestedPolicy& policy, std::span<const std::uint8_t> outcome) {
  const int N = static_cast<int>(outcome.size());
  if (N > policy.N) throw std::invalid_argument("outcome longer than the policy population");

  // Units are taken lowest index first, so the defective set is always the
  // index range [d, e) and the binomial set is [e, N).
  std::vector<int> prefix(N + 1, 0);
  for (int i = 0; i < N; ++i) prefix[i + 1] = prefix[i] + outcome[i];
  auto positive = [&](int lo, int hi) { return prefix[hi] > prefix[lo]; };

  int d = 0;
  int e = 0;
  int tests = 0;
  for (;;) {
    const GTState state = d == e ? GTState{HState{N - e}} : GTState{GState{e - d, N - d}};
    const NextAction action = next_action(policy, state);
    switch (action.kind) {
      case NextAction::Kind::Done:
        return tests;
      case NextAction::Kind::TestBinomial:
        ++tests;
        if (positive(e, e + action.subset_size)) {
          d = e;
          e += action.subset_size;
        } else {
          e += action.subset_size;
          d = e;
        }
        break;
      case NextAction::Kind::TestDefective:
        ++tests;
        if (positive(d, d + action.subset_size)) {
          e = d + action.subset_size;  // the untested remainder rejoins the binomial set
        } else {
          d += action.subset_size;
        }
        break;
      case NextAction::Kind::DeclarePositive:
        d = e;
        break;
    }
  }
}

int run_procedure(ProcedureKind kind, const Design& design, const OutcomeVector& outcome) {
  const auto n = static_cast<std::size_t>(design_size(design));
  if (outcome.size() != n) {
    throw std::invalid_argument("outcome length " + std::to_string(outcome.size()) +
                                " does not match design size " + std::to_string(n));
  }
  if (kind == ProcedureKind::NestedR1) {
    const auto* policy = std::get_if<NestedPolicy>(&design);
    if (!policy) throw std::invalid_argument("procedure R1 needs a nested policy");
    return run_nested(*policy, outcome.bits);
  }
  const auto* partition = std::get_if<Partition>(&design);
  if (!partition) throw std::invalid_argument("procedure " + std::string(to_string(kind)) +
                                              " needs a partition");
  int (*run_group)(std::span<const std::uint8_t>) =
      kind == ProcedureKind::D ? run_group_D
      : kind == ProcedureKind::DPrime ? run_group_DPrime
                                      : run_group_S;
  std::span<const std::uint8_t> rest(outcome.bits);
  int tests = 0;
  for (int size : partition->sizes) {
    tests += run_group(rest.first(size));
    rest = rest.subspan(size);
  }
  return tests;
}

EvalReport exact_expected_tests(ProcedureKind kind, const Design& design, const Prevalence& prev,
                                int cap) {
  const int N = design_size(design);
  if (N > cap || N > 62) {
    throw CapacityExceeded("exact enumeration of 2^" + std::to_string(N) +
                           " outcomes exceeds the cap of N <= " + std::to_string(cap));
  }
  // weight[j] = p^j q^(N-j) for an outcome with j infected units.
  std::vector<double> weight(N + 1);
  for (int j = 0; j <= N; ++j) weight[j] = std::pow(prev.p(), j) * pow_q(prev, N - j);

  OutcomeVector outcome;
  outcome.bits.assign(N, 0);
  double expected = 0.0;
  const std::uint64_t states = std::uint64_t{1} << N;
  for (std::uint64_t mask = 0; mask < states; ++mask) {
    int ones = 0;
    for (int i = 0; i < N; ++i) {
      outcome.bits[i] = static_cast<std::uint8_t>((mask >> i) & 1U);
      ones += outcome.bits[i];
    }
    expected += weight[ones] * run_procedure(kind, design, outcome);
  }
  return EvalReport{expected, EvalMethod::Exact, 0, 0, 0.0, describe_design(kind, design)};
}

std::uint64_t SplitMix64::next() noexcept {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t replicate_stream_seed(std::uint64_t seed, std::uint64_t replicate) noexcept {
  SplitMix64 mixer(seed ^ SplitMix64(replicate).next());
  return mixer.next();
}

EvalReport monte_carlo_expected_tests(ProcedureKind kind, const Design& design,
                                      const Prevalence& prev, std::size_t replicates,
                                      std::uint64_t seed) {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  const int N = design_size(design);
  OutcomeVector outcome;
  outcome.bits.assign(N, 0);

  // Welford running mean and sum of squared deviations.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t r = 0; r < replicates; ++r) {
    SplitMix64 rng(replicate_stream_seed(seed, r));
    for (auto& bit : outcome.bits) bit = rng.uniform() < prev.p() ? 1 : 0;
    const double tests = run_procedure(kind, design, outcome);
    const double delta = tests - mean;
    mean += delta / static_cast<double>(r + 1);
    m2 += delta * (tests - mean);
  }
  const double n = static_cast<double>(replicates);
  const double std_error = replicates > 1 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0;
  return EvalReport{mean, EvalMethod::MonteCarlo, replicates, seed, std_error,
                    describe_design(kind, design)};
}

double evaluate_policy_mismatch(const NestedPolicy& policy, const Prevalence& p_true) {
  const int N = policy.N;
  if (N == 0) return 0.0;
  const double p = p_true.p();
  std::vector<double> q_pow(N + 1);
  for (int i = 0; i <= N; ++i) q_pow[i] = pow_q(p_true, i);

  // A defective set broken down by the fixed x_G decisions always ends by
  // declaring its first positive unit i, returning n - i units to an
  // H-situation. breakdown[m] is the expected number of tests until then.
  std::vector<double> breakdown(N + 1, 0.0);
  for (int m = 2; m <= N; ++m) {
    const int x = policy.x_G[m];
    const double denom = one_minus_pow_q(p_true, m);
    breakdown[m] = 1.0 + (q_pow[x] - q_pow[m]) / denom * breakdown[m - x] +
                   one_minus_pow_q(p_true, x) / denom * breakdown[x];
  }

  std::vector<double> eh(N + 1, 0.0);
  for (int n = 1; n <= N; ++n) {
    const int x = policy.x_H[n];
    double tail = 0.0;  // sum_{i=1}^{x} q^(i-1) EH(n - i)
    for (int i = 1; i <= x; ++i) tail += q_pow[i - 1] * eh[n - i];
    eh[n] = 1.0 + q_pow[x] * eh[n - x] + one_minus_pow_q(p_true, x) * breakdown[x] + p * tail;
  }
  return eh[N];
}

}  // namespace gtd
