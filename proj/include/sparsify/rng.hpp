#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace sparsify {

/// Seedable 64-bit generator with explicit stream splitting.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Replicate r of an experiment seeded with `master` uses
/// derive_seed(master, r), a splitmix64 mix of both values. All derived
/// quantities (uniforms, signs, bounded integers) are computed here from raw
/// engine output, so results do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  static constexpr std::string_view kName = "mt19937_64+splitmix64-streams";

  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);
  static Rng for_stream(std::uint64_t master, std::uint64_t stream) {
    return Rng(derive_seed(master, stream));
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// +1 or -1 with equal probability.
  int rademacher() { return (next() >> 63) ? -1 : 1; }
  /// Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

/// Inverse-CDF sampler over a fixed probability vector.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(std::span<const double> weights);
  std::size_t operator()(Rng& rng) const;
  std::size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

}  // namespace sparsify
