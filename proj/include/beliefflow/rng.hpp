#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace beliefflow {

/// One splitmix64 step; the de-facto standard seed expander.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from a master seed and a path of
/// integers (cell index, trial index, ...). Pure function of its inputs,
/// so any unit of work can be re-run in isolation.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = master ^ 0x8f1bbcdcbfa53e0bULL;
  splitmix64(s);
  for (std::uint64_t p : path) {
    s ^= splitmix64(s) + p;
    splitmix64(s);
  }
  std::uint64_t out = s;
  return splitmix64(out);
}

/// Seeded generator with hand-rolled draw helpers so that every sampled
/// value is a deterministic function of the seed alone (std:: distributions
/// are implementation-defined; the raw mt19937_64 stream is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  /// Unbiased integer in [0, bound) via rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % bound;
  }

  /// Index drawn proportionally to non-negative weights (linear scan).
  /// `total` must be the sum of the weights; returns the last positive
  /// index if rounding pushes the draw past the end.
  int weighted_pick(std::span<const double> weights, double total) {
    double u = next_double() * total;
    double acc = 0.0;
    int last_positive = -1;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      last_positive = static_cast<int>(i);
      acc += weights[i];
      if (u < acc) return last_positive;
    }
    return last_positive;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = next_below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace beliefflow
