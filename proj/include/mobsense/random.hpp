#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "mobsense/geometry.hpp"

namespace mobsense {

/// Identifier written next to experiment outputs so runs can be replicated elsewhere.
inline constexpr std::string_view kGeneratorId = "splitmix64/stream-hash-v1/u53";

/// The pair (master_seed, stream_id) determines every draw of one trial.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

/**
 * @brief SplitMix64 (Steele, Lea, Flood 2014): 64-bit state, one add and a
 * mixing function per output.
 *
 * Satisfies UniformRandomBitGenerator, but the library never routes it through
 * <random> distributions since those are implementation-defined.
 */
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  /// Per-trial generator; the stream id is mixed twice so nearby ids decorrelate.
  explicit SplitMix64(SeedSpec seed) : state_(mix(seed.master_seed ^ mix(seed.stream_id + kGolden))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += kGolden;
    return mix(state_);
  }

  /// Uniform double in [0,1) from the top 53 bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection, so no modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("SplitMix64::below: bound must be positive");
    const std::uint64_t limit = max() - max() % bound;
    for (;;) {
      const std::uint64_t v = (*this)();
      if (v < limit) return v % bound;
    }
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
};

/// Sorted draw of n independent Uniform[0,1] positions; all sensors active and at rest.
inline Placement1D sample_sorted_uniform_1d(std::size_t n, SplitMix64& rng) {
  if (n == 0) throw std::invalid_argument("sample_sorted_uniform_1d: n must be >= 1");
  std::vector<double> xs(n);
  for (double& x : xs) x = rng.uniform();
  std::sort(xs.begin(), xs.end());
  return Placement1D(std::move(xs));
}

inline Placement1D sample_sorted_uniform_1d(std::size_t n, SeedSpec seed) {
  SplitMix64 rng(seed);
  return sample_sorted_uniform_1d(n, rng);
}

/// n independent uniform points in the unit square (x drawn before y).
inline Placement2D sample_uniform_2d(std::size_t n, SplitMix64& rng) {
  if (n == 0) throw std::invalid_argument("sample_uniform_2d: n must be >= 1");
  std::vector<Point2> pts(n);
  for (Point2& p : pts) {
    p.x = rng.uniform();
    p.y = rng.uniform();
  }
  return Placement2D(std::move(pts));
}

inline Placement2D sample_uniform_2d(std::size_t n, SeedSpec seed) {
  SplitMix64 rng(seed);
  return sample_uniform_2d(n, rng);
}

/// One draw of the l-th order statistic (1-based) of n uniforms, i.e. Beta(l, n + 1 - l).
/// Selection is exact: the l-th smallest of n actual draws.
inline double beta_order_statistic_sample(std::size_t l, std::size_t n, SplitMix64& rng,
                                          std::vector<double>& scratch) {
  if (l < 1 || l > n) throw std::invalid_argument("beta_order_statistic_sample: need 1 <= l <= n");
  scratch.resize(n);
  for (double& x : scratch) x = rng.uniform();
  auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(l - 1);
  std::nth_element(scratch.begin(), nth, scratch.end());
  return *nth;
}

inline double beta_order_statistic_sample(std::size_t l, std::size_t n, SeedSpec seed) {
  SplitMix64 rng(seed);
  std::vector<double> scratch;
  return beta_order_statistic_sample(l, n, rng, scratch);
}

}  // namespace mobsense
