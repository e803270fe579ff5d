#pragma once

// Information-theoretic lower bounds on the expected number of tests.

#include <optional>

#include "gtdesign/core.hpp"

namespace gtd {

inline constexpr int kHuffmanCap = 20;

struct BoundReport {
  double entropy_bound = 0.0;
  std::optional<double> huffman_bound;  // present when N <= kHuffmanCap
  int N = 0;
  Prevalence p{0.5};
};

/// Shannon entropy of N independent Bernoulli(p) units, in bits.
double entropy_bound(int N, const Prevalence& prev);

/// Expected codeword length of an optimal binary prefix code over the 2^N
/// infection patterns. States with the same number of positives share a
/// probability, so the merge queue holds (mass, multiplicity) buckets.
/// Throws CapacityExceeded for N > cap.
double huffman_lower_bound(int N, const Prevalence& prev, int cap = kHuffmanCap);

/// Per-person expected tests of the three-leaf tree for two units:
/// pool both, then test the first if the pool is positive.
double ungar_pair_cost(const Prevalence& prev) noexcept;

BoundReport bound_report(int N, const Prevalence& prev);

}  // namespace gtd
