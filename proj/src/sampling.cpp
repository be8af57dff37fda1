#include "sparsify/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sparsify {

namespace {

Matrix weighted_sum(const PsdDecomposition& dec, const Multiset& sigma) {
  Matrix sum = Matrix::Zero(dec.dim, dec.dim);
  for (const auto& [index, count] : sigma.items()) sum += static_cast<double>(count) * dec.matrices[index];
  return sum;
}

double schatten_p_power(const Matrix& a, double p) {
  const Vec s = singular_values(a);
  double acc = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s[i], p);
  return acc;
}

}  // namespace

std::vector<std::size_t> draw_indices(std::span<const double> weights, std::int64_t k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("draw_multiset: k must be >= 1");
  double sum = 0;
  for (double w : weights) sum += w;
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("draw_multiset: weights must sum to 1");
  const CategoricalSampler sampler(weights);
  std::vector<std::size_t> out(static_cast<std::size_t>(k));
  for (auto& i : out) i = sampler(rng);
  return out;
}

Multiset draw_multiset(std::span<const double> weights, std::int64_t k, Rng& rng) {
  const auto indices = draw_indices(weights, k, rng);
  return Multiset::from_indices(indices);
}

double sample_error(const PsdDecomposition& dec, const Multiset& sigma) {
  if (sigma.empty()) throw std::invalid_argument("sample_error: empty multiset");
  if (sigma.index_bound() > dec.size()) throw std::out_of_range("sample_error: multiset index out of range");
  const Matrix avg = weighted_sum(dec, sigma) / static_cast<double>(sigma.size());
  return operator_norm(Matrix(avg - dec.target));
}

Summary summarize(std::span<const double> values) {
  Summary s;
  const std::size_t n = values.size();
  if (n == 0) return s;
  double acc = 0;
  for (double v : values) acc += v;
  s.mean = acc / static_cast<double>(n);
  if (n > 1) {
    double sq = 0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std_dev = std::sqrt(sq / static_cast<double>(n - 1));
  }
  const double half = kNormalQuantile95 * s.std_dev / std::sqrt(static_cast<double>(n));
  s.ci_low = s.mean - half;
  s.ci_high = s.mean + half;
  return s;
}

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: no values");
  if (!(q >= 0 && q <= 1)) throw std::invalid_argument("quantile: q must lie in [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: x and y differ in length");
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) throw std::invalid_argument("fit_line: need at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit_line: x values are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0 ? 1.0 : sxy * sxy / (sxx * syy);
  return fit;
}

ExperimentReport rudelson_experiment(const PsdDecomposition& dec, std::int64_t k, int replicates,
                                     std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("rudelson_experiment: k must be >= 1");
  if (replicates < 1) throw std::invalid_argument("rudelson_experiment: replicates must be >= 1");
  ExperimentReport report;
  report.dim = dec.dim;
  report.k = k;
  report.replicates = replicates;
  report.seed = seed;
  report.replicate_seeds.reserve(replicates);
  report.errors.reserve(replicates);
  for (int r = 0; r < replicates; ++r) {
    const auto s = Rng::derive_seed(seed, static_cast<std::uint64_t>(r));
    Rng rng(s);
    report.replicate_seeds.push_back(s);
    report.errors.push_back(sample_error(dec, draw_multiset(dec.weights, k, rng)));
  }
  report.summary = summarize(report.errors);
  return report;
}

MultisetSearch find_good_multiset(const PsdDecomposition& dec, std::int64_t k, double eps,
                                  int max_attempts, Rng& rng) {
  if (k < 1) throw std::invalid_argument("find_good_multiset: k must be >= 1");
  MultisetSearch out;
  out.error = INFINITY;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    Multiset sigma = draw_multiset(dec.weights, k, rng);
    const double err = sample_error(dec, sigma);
    out.attempts = attempt;
    if (err < out.error) {
      out.error = err;
      out.sigma = std::move(sigma);
    }
    if (err <= eps) {
      out.found = true;
      break;
    }
  }
  return out;
}

NonsymmetricSearch nonsymm_find_multiset(const ContactPairDecomposition& cpd, std::int64_t k, double eps,
                                         int max_attempts, Rng& rng) {
  const LiftedPairs lifted = lift_pairs(cpd);
  const MultisetSearch search = find_good_multiset(lifted.as_decomposition(), k, eps, max_attempts, rng);
  NonsymmetricSearch out;
  out.found = search.found;
  out.attempts = search.attempts;
  out.sigma = search.sigma;
  if (!out.sigma.empty()) out.guarantees = extract_guarantees(lifted, out.sigma);
  return out;
}

double lust_piquard_diagnostic(std::span<const Matrix> matrices, double p, int trials, Rng& rng) {
  if (!(p >= 2)) throw std::invalid_argument("lust_piquard_diagnostic: p must be >= 2");
  if (matrices.empty()) throw std::invalid_argument("lust_piquard_diagnostic: no matrices");
  if (trials < 1) throw std::invalid_argument("lust_piquard_diagnostic: trials must be >= 1");
  const Eigen::Index d = matrices.front().rows();
  Matrix square_sum = Matrix::Zero(d, d);
  for (const auto& q : matrices) square_sum += q * q.transpose() + q.transpose() * q;
  // ||S^{1/2}||_{S_p} for PSD S from the eigenvalues of S
  const Vec lambda = symmetric_eigenvalues(square_sum);
  double denom_acc = 0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) denom_acc += std::pow(std::max(lambda[i], 0.0), p / 2);
  const double denom = std::sqrt(p) * std::pow(denom_acc, 1.0 / p);
  if (!(denom > 0)) throw std::domain_error("lust_piquard_diagnostic: all matrices are zero (0/0)");

  double acc = 0;
  for (int t = 0; t < trials; ++t) {
    Matrix signed_sum = Matrix::Zero(d, d);
    for (const auto& q : matrices) signed_sum += rng.rademacher() * q;
    acc += schatten_p_power(signed_sum, p);
  }
  return std::pow(acc / trials, 1.0 / p) / denom;
}

SymmetrizationCheck symmetrization_check(const PsdDecomposition& dec, std::int64_t k, int replicates,
                                         std::uint64_t seed) {
  if (k < 1 || replicates < 2) throw std::invalid_argument("symmetrization_check: need k >= 1 and replicates >= 2");
  std::vector<double> lhs, rhs;
  lhs.reserve(replicates);
  rhs.reserve(replicates);
  for (int r = 0; r < replicates; ++r) {
    Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(r));
    const auto draws = draw_indices(dec.weights, k, rng);
    Matrix plain = Matrix::Zero(dec.dim, dec.dim);
    Matrix signed_sum = Matrix::Zero(dec.dim, dec.dim);
    for (std::size_t i : draws) {
      plain += dec.matrices[i];
      signed_sum += rng.rademacher() * dec.matrices[i];
    }
    lhs.push_back(operator_norm(Matrix(plain / static_cast<double>(k) - dec.target)));
    rhs.push_back(2.0 / static_cast<double>(k) * operator_norm(signed_sum));
  }
  return {summarize(lhs), summarize(rhs), replicates};
}

}  // namespace sparsify
