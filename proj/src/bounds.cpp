#include "gtdesign/bounds.hpp"

#include <cmath>
#include <cstdint>
#include <queue>
#include <string>
#include <vector>

namespace gtd {

double entropy_bound(int N, const Prevalence& prev) {
  if (N < 0) throw std::invalid_argument("population size must be >= 0");
  const double p = prev.p();
  const double q = prev.q();
  return N * (-p * std::log2(p) - q * std::log2(q));
}

namespace {

struct Bucket {
  double mass;               // probability of each item in the bucket
  std::uint64_t count;       // number of items sharing that probability
  std::uint64_t sequence;    // insertion order, breaks ties between equal masses

  bool operator>(const Bucket& other) const {
    if (mass != other.mass) return mass > other.mass;
    return sequence > other.sequence;
  }
};

}  // namespace

double huffman_lower_bound(int N, const Prevalence& prev, int cap) {
  if (N < 1) throw std::invalid_argument("population size must be >= 1");
  if (N > cap) {
    throw CapacityExceeded("Huffman bound over 2^" + std::to_string(N) +
                           " states exceeds the cap of N <= " + std::to_string(cap));
  }

  std::priority_queue<Bucket, std::vector<Bucket>, std::greater<>> queue;
  std::uint64_t sequence = 0;
  double binomial = 1.0;  // C(N, j)
  for (int j = 0; j <= N; ++j) {
    const double mass = std::pow(prev.p(), j) * pow_q(prev, N - j);
    queue.push({mass, static_cast<std::uint64_t>(std::llround(binomial)), sequence++});
    binomial = binomial * (N - j) / (j + 1);
  }

  // The expected codeword length is the sum of the masses of all merged nodes.
  double length = 0.0;
  std::uint64_t items = std::uint64_t{1} << N;
  while (items > 1) {
    Bucket smallest = queue.top();
    queue.pop();
    if (smallest.count >= 2) {
      const std::uint64_t pairs = smallest.count / 2;
      length += static_cast<double>(pairs) * 2.0 * smallest.mass;
      queue.push({2.0 * smallest.mass, pairs, sequence++});
      if (smallest.count % 2 == 1) queue.push({smallest.mass, 1, smallest.sequence});
      items -= pairs;
      continue;
    }
    // A lone item merges with one item from the next bucket.
    Bucket partner = queue.top();
    queue.pop();
    const double merged = smallest.mass + partner.mass;
    length += merged;
    queue.push({merged, 1, sequence++});
    if (partner.count > 1) queue.push({partner.mass, partner.count - 1, partner.sequence});
    items -= 1;
  }
  return length;
}

double ungar_pair_cost(const Prevalence& prev) noexcept {
  const double q = prev.q();
  return 0.5 * (3.0 - q - q * q);
}

BoundReport bound_report(int N, const Prevalence& prev) {
  BoundReport report{entropy_bound(N, prev), std::nullopt, N, prev};
  if (N >= 1 && N <= kHuffmanCap) report.huffman_bound = huffman_lower_bound(N, prev);
  return report;
}

}  // namespace gtd
