#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparsify/decompositions.hpp"
#include "sparsify/multiset.hpp"
#include "sparsify/rng.hpp"

namespace sparsify {

inline constexpr int kDefaultReplicates = 200;
inline constexpr double kNormalQuantile95 = 1.959963984540054;

/// k i.i.d. categorical draws, in draw order.
std::vector<std::size_t> draw_indices(std::span<const double> weights, std::int64_t k, Rng& rng);
Multiset draw_multiset(std::span<const double> weights, std::int64_t k, Rng& rng);

/// ||(1/|sigma|) sum_{i in sigma} Q_i - A||.
double sample_error(const PsdDecomposition& dec, const Multiset& sigma);

struct Summary {
  double mean = 0;
  double std_dev = 0;  // sample standard deviation (n-1)
  double ci_low = 0;
  double ci_high = 0;
};
Summary summarize(std::span<const double> values);

/// Empirical q-quantile with linear interpolation between order statistics.
double quantile(std::span<const double> values, double q);

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};
/// Ordinary least squares y = slope x + intercept; needs >= 2 distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct ExperimentReport {
  int dim = 0;
  std::int64_t k = 0;
  std::optional<double> eps;
  int replicates = 0;
  std::uint64_t seed = 0;
  std::string rng_name{Rng::kName};
  std::vector<std::uint64_t> replicate_seeds;
  std::vector<double> errors;
  Summary summary;
};

/// Monte Carlo estimate of E||(1/k) sum Q_i - A|| over `replicates` independent
/// samples; replicate r draws from Rng::for_stream(seed, r).
ExperimentReport rudelson_experiment(const PsdDecomposition& dec, std::int64_t k, int replicates,
                                     std::uint64_t seed);

struct MultisetSearch {
  bool found = false;
  Multiset sigma;  // the successful multiset, or the best one seen on failure
  double error = 0;
  int attempts = 0;
};

/// Repeated i.i.d. sampling until sample_error <= eps or max_attempts draws.
MultisetSearch find_good_multiset(const PsdDecomposition& dec, std::int64_t k, double eps,
                                  int max_attempts, Rng& rng);

struct NonsymmetricSearch {
  bool found = false;
  Multiset sigma;
  ExtractedGuarantees guarantees;
  int attempts = 0;
};

/// Lifts the pairs to dimension d+1 and searches for sigma of size k whose
/// lifted average is eps-close to I_{d+1}; the d-dimensional diad error and
/// balance terms are extracted from the winning sample.
NonsymmetricSearch nonsymm_find_multiset(const ContactPairDecomposition& cpd, std::int64_t k, double eps,
                                         int max_attempts, Rng& rng);

/// Empirical ratio
///   [E_r ||sum r_j Q_j||_{S_p}^p]^{1/p} / (sqrt(p) ||(sum Q_j Q_j^T + Q_j^T Q_j)^{1/2}||_{S_p})
/// over `trials` Rademacher sign vectors.
double lust_piquard_diagnostic(std::span<const Matrix> matrices, double p, int trials, Rng& rng);

struct SymmetrizationCheck {
  Summary deviation;  // ||(1/k) sum q_l - A||
  Summary rademacher; // (2/k) ||sum r_l q_l||
  int replicates = 0;
};

/// Both sides of the Rademacher symmetrization inequality, estimated on the
/// same draws.
SymmetrizationCheck symmetrization_check(const PsdDecomposition& dec, std::int64_t k, int replicates,
                                         std::uint64_t seed);

}  // namespace sparsify
