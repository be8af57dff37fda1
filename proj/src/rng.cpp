#include "sparsify/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sparsify {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t Rng::derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(~stream));
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

CategoricalSampler::CategoricalSampler(std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("categorical: empty weight vector");
  double acc = 0;
  cumulative_.reserve(weights.size());
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0) throw std::invalid_argument("categorical: weights must be finite and non-negative");
    acc += w;
    cumulative_.push_back(acc);
  }
  if (!(acc > 0)) throw std::invalid_argument("categorical: weights sum to zero");
}

std::size_t CategoricalSampler::operator()(Rng& rng) const {
  const double x = rng.uniform01() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
  // x < total, so it is never end() barring rounding in the last partial sum
  return std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
}

}  // namespace sparsify
