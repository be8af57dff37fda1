#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sparsify/constructions.hpp"
#include "sparsify/multiset.hpp"
#include "sparsify/rng.hpp"

namespace sparsify {

/// ||(1/s) sum_{i in sigma0} e_i/2 - a||_1 with a = (1/(12k))(1,...,1).
/// Indices 0..t-1 are basis vectors of R^t; index t stands for the zero vector.
/// Requires 1 <= |sigma0| <= 3k.
double l1_center_gap(int t, std::int64_t k, const Multiset& sigma0);

struct L1GapCheck {
  std::int64_t multisets_checked = 0;
  std::int64_t violations = 0;
  double min_margin = 0;  // min over checked sigma0 of gap - t/(12k)
};

/// Exhaustive check of the l1 gap bound over every admissible sigma0 for each
/// 1 <= t <= t_max, 1 <= k <= k_max.
L1GapCheck verify_l1_gap_bound(int t_max, int k_max);

enum class SearchMode { Auto, Exhaustive, Random };

const char* to_string(SearchMode mode);
SearchMode parse_search_mode(const std::string& text);

struct SearchOptions {
  SearchMode mode = SearchMode::Auto;
  std::int64_t exhaustive_limit = 1'000'000;
  std::int64_t random_samples = 100'000;
  std::uint64_t seed = 1;
};

struct SizeRow {
  std::int64_t size = 0;
  double min_error = 0;
  Multiset witness;
};

struct LowerBoundReport {
  SearchMode mode = SearchMode::Exhaustive;  // Exhaustive or Random after resolution
  std::int64_t max_size = 0;
  std::int64_t multisets_examined = 0;
  double min_error = 0;
  Multiset witness;
  double eps = 0;
  bool certified = false;  // true iff every multiset of size <= max_size was examined
  std::vector<SizeRow> rows;

  bool holds() const { return min_error >= eps; }
};

/// Number of non-empty multisets of at most `max_size` elements drawn from n
/// items, saturating at `cap`.
std::int64_t multiset_count(std::int64_t n, std::int64_t max_size, std::int64_t cap);

/// sample_error restricted to diagonal members: max_j |avg_jj - target_jj|.
double diagonal_sample_error(const LogNeededInstance& inst, const Multiset& sigma);

/// Minimum sample error over multisets of [t+2] with 1 <= |sigma| <= floor(size_bound).
LowerBoundReport min_error_over_multisets(const LogNeededInstance& inst, const SearchOptions& options = {});

/// Largest |diagonal_sample_error - sample_error| over random multisets.
double diagonal_fast_path_discrepancy(const LogNeededInstance& inst, int samples, Rng& rng);

using Support = std::vector<std::pair<int, int>>;  // (row i, column j), 0-based

struct BetaFit {
  double error = 0;             // best operator-norm residual found (an upper bound on the minimum)
  double frobenius_error = 0;   // operator-norm residual at the Frobenius least-squares beta
  std::vector<double> beta;     // aligned with the support
  bool least_squares_start = true;  // false when the support was rank deficient
  int iterations = 0;
};

struct BetaFitOptions {
  int iterations = 5000;
  double step_scale = 0;  // 0 selects 1/(d d')
};

/// Upper bound on min_beta ||sum_{(i,j) in M} beta_ij Q_ij - I|| by subgradient
/// descent from the Frobenius least-squares point, keeping the best iterate.
BetaFit best_beta_error(const CubeSimplexInstance& inst, const Support& support, const BetaFitOptions& options = {});

Matrix beta_combination(const CubeSimplexInstance& inst, const Support& support, const std::vector<double>& beta);

struct BmCertificate {
  double value = 0;           // certified lower bound on ||A - I||
  double diagonal_test = 0;   // |<(A - I) e_r, e_r>|
  double direction_test = 0;  // |<(A - I) x, e_r>|
  int row = 0;                // row with fewest non-zero coefficients
  int ell = 0;                // its number of non-zero coefficients
  double coefficient_sum = 0; // d' * sum_j beta_rj
  double analytic_bound = 0;  // delta / (4 sqrt(ell)), 0 when ell = 0
  bool analytic_applies = false;  // ell < d'/2 and d' sum_j beta_rj >= 1/2
  bool consistent = true;     // analytic_applies implies value >= analytic_bound
  bool excludes_eps = false;  // value > eps: A is certainly not an eps-approximation of I
};

/// Lower bound on ||A - I|| for A = sum beta Q from the test vectors e_r and x = y/|y|,
/// y = sum_{j: beta_rj != 0} (w_r^j - e_r), r the sparsest row of the support.
BmCertificate bm_certificate(const CubeSimplexInstance& inst, const Support& support,
                             const std::vector<double>& beta, double eps);

/// d * min(d/4, (delta/(4 eps))^2).
double bm_lower_bound(int d, double delta, double eps);

Support random_support(const CubeSimplexInstance& inst, int size, Rng& rng);
Support full_support(const CubeSimplexInstance& inst);

}  // namespace sparsify
