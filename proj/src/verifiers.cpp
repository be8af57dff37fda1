#include "sparsify/verifiers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "sparsify/sampling.hpp"

namespace sparsify {

namespace {

using Counts = std::vector<std::int64_t>;

/// Calls visit(counts) for every count vector of length n summing to s.
void for_each_multiset(std::size_t n, std::int64_t s, const std::function<void(const Counts&)>& visit) {
  Counts counts(n, 0);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t remaining) {
    if (i + 1 == n) {
      counts[i] = remaining;
      visit(counts);
      counts[i] = 0;
      return;
    }
    for (std::int64_t c = remaining; c >= 0; --c) {
      counts[i] = c;
      rec(i + 1, remaining - c);
    }
    counts[i] = 0;
  };
  rec(0, s);
}

Multiset to_multiset(const Counts& counts) {
  Multiset m;
  for (std::size_t i = 0; i < counts.size(); ++i) m.add(i, static_cast<std::size_t>(counts[i]));
  return m;
}

std::int64_t max_multiset_size(const LogNeededInstance& inst) {
  return static_cast<std::int64_t>(std::floor(inst.size_bound * (1 + 1e-12)));
}

/// Error of the average over `counts` from the exact integer diagonal sums.
double exact_diagonal_error(const LogNeededInstance& inst, const Counts& counts, std::int64_t size) {
  const double scale = inst.gamma / (static_cast<double>(inst.denominator()) * static_cast<double>(size));
  double worst = 0;
  for (int j = 0; j < inst.d_pow; ++j) {
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) acc += counts[i] * inst.numerators[i][j];
    worst = std::max(worst, std::abs(scale * static_cast<double>(acc) - 1.0));
  }
  return worst;
}

double error_of(const LogNeededInstance& inst, const Counts& counts) {
  const std::int64_t size = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  return exact_diagonal_error(inst, counts, size);
}

/// One-swap descent: move a single element to another index while that helps.
double greedy_improve(const LogNeededInstance& inst, Counts& counts) {
  double best = error_of(inst, counts);
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t from = 0; from < counts.size() && !improved; ++from) {
      if (counts[from] == 0) continue;
      for (std::size_t to = 0; to < counts.size(); ++to) {
        if (to == from) continue;
        --counts[from];
        ++counts[to];
        const double e = error_of(inst, counts);
        if (e < best) {
          best = e;
          improved = true;
          break;
        }
        ++counts[from];
        --counts[to];
      }
    }
  }
  return best;
}

}  // namespace

double l1_center_gap(int t, std::int64_t k, const Multiset& sigma0) {
  if (t < 1 || k < 1) throw std::invalid_argument("l1_center_gap: t and k must be positive");
  const auto s = static_cast<std::int64_t>(sigma0.size());
  if (s == 0) throw std::invalid_argument("l1_center_gap: empty multiset");
  if (s > 3 * k) throw std::invalid_argument("l1_center_gap: |sigma0| = " + std::to_string(s) + " exceeds 3k = " +
                                             std::to_string(3 * k));
  if (sigma0.index_bound() > static_cast<std::size_t>(t) + 1)
    throw std::out_of_range("l1_center_gap: index outside [t+1]");
  std::vector<double> coords(t, 0.0);
  for (const auto& [index, count] : sigma0.items())
    if (index < static_cast<std::size_t>(t)) coords[index] += static_cast<double>(count) / (2.0 * s);
  const double center = 1.0 / (12.0 * static_cast<double>(k));
  double gap = 0;
  for (double b : coords) gap += std::abs(b - center);
  return gap;
}

L1GapCheck verify_l1_gap_bound(int t_max, int k_max) {
  L1GapCheck out;
  out.min_margin = INFINITY;
  for (int t = 1; t <= t_max; ++t) {
    for (std::int64_t k = 1; k <= k_max; ++k) {
      for (std::int64_t s = 1; s <= 3 * k; ++s) {
        for_each_multiset(static_cast<std::size_t>(t) + 1, s, [&](const Counts& counts) {
          ++out.multisets_checked;
          // gap * 12ks = sum_i |6k c_i - s|, bound * 12ks = t s
          std::int64_t scaled = 0;
          for (int i = 0; i < t; ++i) scaled += std::abs(6 * k * counts[i] - s);
          if (scaled < t * s) ++out.violations;
          const auto margin = static_cast<double>(scaled - t * s) / static_cast<double>(12 * k * s);
          out.min_margin = std::min(out.min_margin, margin);
        });
      }
    }
  }
  return out;
}

const char* to_string(SearchMode mode) {
  switch (mode) {
    case SearchMode::Auto: return "auto";
    case SearchMode::Exhaustive: return "exhaustive";
    case SearchMode::Random: return "random";
  }
  return "?";
}

SearchMode parse_search_mode(const std::string& text) {
  if (text == "auto") return SearchMode::Auto;
  if (text == "exhaustive") return SearchMode::Exhaustive;
  if (text == "random" || text == "greedy") return SearchMode::Random;
  throw std::invalid_argument("unknown search mode '" + text + "' (expected auto, exhaustive or random)");
}

std::int64_t multiset_count(std::int64_t n, std::int64_t max_size, std::int64_t cap) {
  if (n < 1 || max_size < 1) return 0;
  unsigned __int128 total = 0;
  unsigned __int128 term = 1;  // C(n + s - 1, s) at s = 0
  for (std::int64_t s = 1; s <= max_size; ++s) {
    term = term * static_cast<unsigned __int128>(n + s - 1) / static_cast<unsigned __int128>(s);
    total += term;
    if (total >= static_cast<unsigned __int128>(cap)) return cap;
  }
  return static_cast<std::int64_t>(total);
}

double diagonal_sample_error(const LogNeededInstance& inst, const Multiset& sigma) {
  if (sigma.empty()) throw std::invalid_argument("diagonal_sample_error: empty multiset");
  if (sigma.index_bound() > inst.size()) throw std::out_of_range("diagonal_sample_error: index out of range");
  Vec diag = Vec::Zero(inst.d_out);
  for (const auto& [index, count] : sigma.items()) diag += static_cast<double>(count) * inst.matrices[index].diagonal();
  diag /= static_cast<double>(sigma.size());
  return (diag - inst.target().diagonal()).cwiseAbs().maxCoeff();
}

double diagonal_fast_path_discrepancy(const LogNeededInstance& inst, int samples, Rng& rng) {
  const PsdDecomposition dec = inst.decomposition();
  const std::int64_t max_size = std::max<std::int64_t>(1, max_multiset_size(inst));
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    const auto size = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(max_size)));
    Multiset sigma;
    for (std::int64_t i = 0; i < size; ++i) sigma.add(rng.below(inst.size()));
    worst = std::max(worst, std::abs(diagonal_sample_error(inst, sigma) - sample_error(dec, sigma)));
  }
  return worst;
}

LowerBoundReport min_error_over_multisets(const LogNeededInstance& inst, const SearchOptions& options) {
  LowerBoundReport report;
  report.eps = inst.eps;
  report.max_size = max_multiset_size(inst);
  report.min_error = INFINITY;
  const std::size_t n = inst.size();
  if (report.max_size < 1) {
    // no non-empty multiset respects the bound; the claim is vacuous
    report.mode = SearchMode::Exhaustive;
    report.certified = true;
    return report;
  }

  SearchMode mode = options.mode;
  if (mode == SearchMode::Auto)
    mode = multiset_count(static_cast<std::int64_t>(n), report.max_size, options.exhaustive_limit + 1) <=
                   options.exhaustive_limit
               ? SearchMode::Exhaustive
               : SearchMode::Random;
  report.mode = mode;

  std::vector<Counts> best_counts(static_cast<std::size_t>(report.max_size));
  report.rows.resize(static_cast<std::size_t>(report.max_size));
  for (std::int64_t s = 1; s <= report.max_size; ++s) {
    report.rows[s - 1].size = s;
    report.rows[s - 1].min_error = INFINITY;
  }
  auto offer = [&](const Counts& counts, std::int64_t s, double err) {
    auto& row = report.rows[s - 1];
    if (err < row.min_error) {
      row.min_error = err;
      best_counts[s - 1] = counts;
    }
  };

  if (mode == SearchMode::Exhaustive) {
    for (std::int64_t s = 1; s <= report.max_size; ++s) {
      for_each_multiset(n, s, [&](const Counts& counts) {
        ++report.multisets_examined;
        offer(counts, s, exact_diagonal_error(inst, counts, s));
      });
    }
    report.certified = true;
  } else {
    Rng rng(options.seed);
    for (std::int64_t r = 0; r < options.random_samples; ++r) {
      const auto s = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(report.max_size)));
      Counts counts(n, 0);
      for (std::int64_t i = 0; i < s; ++i) ++counts[rng.below(n)];
      ++report.multisets_examined;
      offer(counts, s, exact_diagonal_error(inst, counts, s));
    }
    for (std::int64_t s = 1; s <= report.max_size; ++s) {
      Counts counts = best_counts[s - 1];
      if (counts.empty()) continue;
      const double err = greedy_improve(inst, counts);
      offer(counts, s, err);
    }
    report.certified = false;
  }

  for (std::int64_t s = 1; s <= report.max_size; ++s) {
    auto& row = report.rows[s - 1];
    if (!best_counts[s - 1].empty()) row.witness = to_multiset(best_counts[s - 1]);
    if (row.min_error < report.min_error) {
      report.min_error = row.min_error;
      report.witness = row.witness;
    }
  }
  return report;
}

Support full_support(const CubeSimplexInstance& inst) {
  Support m;
  for (int i = 0; i < inst.d; ++i)
    for (int j = 0; j < inst.d_prime; ++j) m.emplace_back(i, j);
  return m;
}

Support random_support(const CubeSimplexInstance& inst, int size, Rng& rng) {
  Support all = full_support(inst);
  if (size < 1 || static_cast<std::size_t>(size) > all.size())
    throw std::invalid_argument("random_support: size must lie in [1, d d']");
  for (int i = 0; i < size; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(all.size() - i));
    std::swap(all[i], all[j]);
  }
  all.resize(size);
  std::sort(all.begin(), all.end());
  return all;
}

Matrix beta_combination(const CubeSimplexInstance& inst, const Support& support, const std::vector<double>& beta) {
  if (beta.size() != support.size()) throw std::invalid_argument("beta_combination: beta and support differ in length");
  Matrix a = Matrix::Zero(inst.d, inst.d);
  for (std::size_t m = 0; m < support.size(); ++m) {
    const auto [i, j] = support[m];
    // beta d e_i w^T
    a.row(i) += beta[m] * inst.d * inst.w.at(i).at(j).transpose();
  }
  return a;
}

BetaFit best_beta_error(const CubeSimplexInstance& inst, const Support& support, const BetaFitOptions& options) {
  if (support.empty()) throw std::invalid_argument("best_beta_error: empty support");
  const int d = inst.d;
  const auto cols = static_cast<Eigen::Index>(support.size());
  const Matrix identity = Matrix::Identity(d, d);

  // columns are vec(Q_ij); least squares against vec(I)
  Matrix design = Matrix::Zero(static_cast<Eigen::Index>(d) * d, cols);
  for (Eigen::Index m = 0; m < cols; ++m) {
    const auto [i, j] = support[m];
    const Matrix q = inst.member(i, j);
    design.col(m) = q.reshaped();
  }
  BetaFit fit;
  Vec beta = Vec::Zero(cols);
  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() == cols) {
    beta = qr.solve(Vec(identity.reshaped()));
  } else {
    fit.least_squares_start = false;
  }

  auto as_vector = [](const Vec& b) { return std::vector<double>(b.data(), b.data() + b.size()); };
  fit.beta = as_vector(beta);
  fit.frobenius_error = operator_norm(Matrix(beta_combination(inst, support, fit.beta) - identity));
  fit.error = fit.frobenius_error;

  const double eta0 = options.step_scale > 0 ? options.step_scale : 1.0 / (static_cast<double>(d) * inst.d_prime);
  for (int iter = 1; iter <= options.iterations; ++iter) {
    const Matrix residual = beta_combination(inst, support, as_vector(beta)) - identity;
    const auto top = top_singular_pair(residual);
    if (top.value < fit.error) {
      fit.error = top.value;
      fit.beta = as_vector(beta);
    }
    if (top.value == 0) break;
    // d/d beta_m of ||R|| = left^T Q_m right = d * left_i * <w_ij, right>
    Vec grad(cols);
    for (Eigen::Index m = 0; m < cols; ++m) {
      const auto [i, j] = support[m];
      grad[m] = d * top.left[i] * inst.w[i][j].dot(top.right);
    }
    beta -= eta0 / std::sqrt(static_cast<double>(iter)) * grad;
    fit.iterations = iter;
  }
  const double last = operator_norm(Matrix(beta_combination(inst, support, as_vector(beta)) - identity));
  if (last < fit.error) {
    fit.error = last;
    fit.beta = as_vector(beta);
  }
  return fit;
}

BmCertificate bm_certificate(const CubeSimplexInstance& inst, const Support& support,
                             const std::vector<double>& beta, double eps) {
  if (beta.size() != support.size()) throw std::invalid_argument("bm_certificate: beta and support differ in length");
  const int d = inst.d;
  std::vector<int> nonzero(d, 0);
  for (std::size_t m = 0; m < support.size(); ++m)
    if (beta[m] != 0) ++nonzero[support[m].first];

  BmCertificate cert;
  cert.row = static_cast<int>(std::min_element(nonzero.begin(), nonzero.end()) - nonzero.begin());
  cert.ell = nonzero[cert.row];
  const int r = cert.row;

  const Matrix residual = beta_combination(inst, support, beta) - Matrix::Identity(d, d);
  cert.diagonal_test = std::abs(residual(r, r));

  double beta_sum = 0;
  Vec y = Vec::Zero(d);
  for (std::size_t m = 0; m < support.size(); ++m) {
    const auto [i, j] = support[m];
    if (i != r || beta[m] == 0) continue;
    beta_sum += beta[m];
    y += inst.w[i][j] - Vec::Unit(d, i);
  }
  cert.coefficient_sum = inst.d_prime * beta_sum;
  if (cert.ell > 0 && y.norm() > 0) {
    const Vec x = y / y.norm();
    cert.direction_test = std::abs(residual.row(r).dot(x));
    cert.analytic_bound = inst.delta / (4 * std::sqrt(static_cast<double>(cert.ell)));
    cert.analytic_applies = 2 * cert.ell < inst.d_prime && cert.coefficient_sum >= 0.5;
  }
  cert.value = std::max(cert.diagonal_test, cert.direction_test);
  cert.consistent = !cert.analytic_applies || cert.value >= cert.analytic_bound - 1e-12;
  cert.excludes_eps = cert.value > eps;
  return cert;
}

double bm_lower_bound(int d, double delta, double eps) {
  if (d <= 2) throw std::invalid_argument("bm_lower_bound: d must be > 2");
  if (!(eps > 0 && eps < 0.5)) throw std::invalid_argument("bm_lower_bound: eps must lie in (0, 1/2)");
  if (!(delta > 0 && delta < std::sqrt(d / 2.0 - 1)))
    throw std::invalid_argument("bm_lower_bound: delta must lie in (0, sqrt(d/2 - 1))");
  const double ratio = delta / (4 * eps);
  return d * std::min(d / 4.0, ratio * ratio);
}

}  // namespace sparsify
