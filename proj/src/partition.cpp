#include "gtdesign/partition.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "gtdesign/size_opt.hpp"

namespace gtd {

namespace {

void require_population(int N) {
  if (N < 0) throw std::invalid_argument("population size must be >= 0");
}

}  // namespace

double partition_cost(ProcedureKind kind, const std::vector<int>& sizes, const Prevalence& prev) {
  double total = 0.0;
  for (int size : sizes) total += group_cost(kind, size, prev).total;
  return total;
}

Partition make_partition(ProcedureKind kind, std::vector<int> sizes, const Prevalence& prev) {
  require_fixed_size_procedure(kind);
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  Partition out{kind, 0, prev, {}, 0.0};
  for (int size : sizes) {
    if (size < 1) throw std::invalid_argument("group sizes must be positive");
    out.N += size;
  }
  out.total_expected_tests = partition_cost(kind, sizes, prev);
  out.sizes = std::move(sizes);
  return out;
}

Partition optimal_partition_dp(ProcedureKind kind, int N, const Prevalence& prev) {
  require_fixed_size_procedure(kind);
  require_population(N);
  if (individual_testing_optimal(prev)) {
    return make_partition(kind, std::vector<int>(N, 1), prev);
  }

  std::vector<double> group(N + 1, 0.0);
  for (int k = 1; k <= N; ++k) group[k] = group_cost(kind, k, prev).total;

  std::vector<double> best(N + 1, 0.0);
  std::vector<int> split(N + 1, 0);
  for (int k = 1; k <= N; ++k) {
    double value = best[0] + group[k];
    int arg = 0;
    for (int x = 1; x < k; ++x) {
      const double candidate = best[x] + group[k - x];
      if (candidate < value - kTieTolerance) {
        value = candidate;
        arg = x;
      }
    }
    best[k] = value;
    split[k] = arg;
  }

  std::vector<int> sizes;
  for (int k = N; k > 0; k = split[k]) sizes.push_back(k - split[k]);
  Partition out = make_partition(kind, std::move(sizes), prev);
  out.N = N;
  return out;
}

std::vector<int> balanced_sizes(int N, int groups) {
  if (groups < 1 || groups > N) {
    throw std::invalid_argument("group count must lie in 1..N");
  }
  const int small = N / groups;
  const int n_small = groups * (small + 1) - N;
  const int n_large = N - groups * small;
  std::vector<int> sizes(n_large, small + 1);
  sizes.insert(sizes.end(), n_small, small);
  return sizes;
}

DirectConstruction optimal_partition_direct(ProcedureKind kind, int N, const Prevalence& prev) {
  require_fixed_size_procedure(kind);
  require_population(N);

  DirectConstruction out;
  out.a = optimal_size(kind, prev).k_star;
  out.s = N / out.a;
  out.theta = N - out.s * out.a;

  if (N == 0) {
    out.option_i = make_partition(kind, {}, prev);
    out.option_ii = out.option_i;
    return out;
  }
  if (out.theta == 0) {
    out.option_i = make_partition(kind, std::vector<int>(out.s, out.a), prev);
    out.option_ii = out.option_i;
    return out;
  }
  if (out.s == 0) {
    // N < a: one pool of everything, or two near-equal pools.
    out.option_i = make_partition(kind, {N}, prev);
    out.option_ii = N >= 2 ? make_partition(kind, balanced_sizes(N, 2), prev) : out.option_i;
  } else {
    out.option_i = make_partition(kind, balanced_sizes(N, out.s), prev);
    out.option_ii = make_partition(kind, balanced_sizes(N, out.s + 1), prev);
  }
  if (out.option_ii.total_expected_tests <
      out.option_i.total_expected_tests - kTieTolerance) {
    out.chosen = DirectConstruction::Choice::OptionII;
  }
  return out;
}

Partition balance_improve(ProcedureKind kind, std::vector<int> sizes, const Prevalence& prev) {
  if (sizes.empty()) throw std::invalid_argument("balance_improve needs at least one group");
  for (;;) {
    auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
    if (*hi - *lo < 2) break;
    --*hi;
    ++*lo;
  }
  return make_partition(kind, std::move(sizes), prev);
}

std::string format_group_counts(const std::vector<int>& sizes) {
  std::map<int, int> counts;
  for (int size : sizes) ++counts[size];
  std::ostringstream out;
  bool first = true;
  for (const auto& [size, count] : counts) {
    if (!first) out << ", ";
    out << count << "\xC3\x97" << size;
    first = false;
  }
  return out.str();
}

std::string format_sizes(const std::vector<int>& sizes) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) out << ',';
    out << sizes[i];
  }
  out << '}';
  return out.str();
}

}  // namespace gtd
