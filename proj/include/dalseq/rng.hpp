#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dalseq {

// Counter-based deterministic generator (SplitMix64 output function over a
// per-stream base plus a running counter). Value i of stream s under seed k
// depends only on (k, s, i), so independent consumers never interact and a
// copied generator replays the same draws.
//
// Stream ids used across the project; keep them distinct.
enum RngStream : uint64_t {
  kStreamInit = 1,
  kStreamDropout = 2,
  kStreamShuffle = 3,
  kStreamSplit = 4,
  kStreamSynth = 5,
  kStreamGradCheck = 6,
};

class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream)
      : base_(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream))) {}

  uint64_t next_u64() { return mix(base_ + counter_++ * 0x9e3779b97f4a7c15ULL); }

  // Uniform in [0, 1).
  double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  // Unbiased draw in [0, n) via rejection.
  uint64_t next_below(uint64_t n) {
    if (n <= 1) return 0;
    uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
    uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  uint64_t base_;
  uint64_t counter_ = 0;
};

// Fisher-Yates with CounterRng. std::shuffle is implementation-defined, so
// reproducible orderings go through this instead.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, CounterRng& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    size_t j = size_t(rng.next_below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace dalseq
