#pragma once

#include <cstdint>
#include <vector>

#include "sparsify/decompositions.hpp"
#include "sparsify/linalg.hpp"

namespace sparsify {

/// Recursive Walsh (Sylvester-Hadamard) matrix of order D, D a power of two.
IntMatrix walsh(std::int64_t order);

/// Entry `coord` of the j-th +-1 sequence of length t. Sequences are ordered
/// lexicographically with +1 before -1, i.e. bit (t-1-coord) of j set means -1.
inline int sign_entry(std::int64_t j, int t, int coord) {
  return ((j >> (t - 1 - coord)) & 1) ? -1 : 1;
}

/// x -> (<x, s_1>, ..., <x, s_{2^t}>): an isometry from l_1^t into l_inf^{2^t}.
Vec l1_to_linf_embed(const Vec& x);

/// Diagonal PSD family whose average cannot approximate I with few terms.
///
/// Members Q_0..Q_{t} are gamma * (phi(e_i/2 - a) + I) with e_t = 0 and
/// a = (1/(12k)) (1,...,1); Q_{t+1} = 0. The diagonal of Q_i / gamma is
/// numerators[i][j] / (12k) with integer numerators, which keeps the
/// identity and trace checks exact.
struct LogNeededInstance {
  int t = 0;
  int d_pow = 0;   // 2^t
  int d_out = 0;   // requested dimension; members are padded to d_out x d_out
  double gamma = 1;
  double eps = 0;
  std::int64_t k = 0;
  Vec a;
  std::vector<std::vector<std::int64_t>> numerators;
  std::vector<Matrix> matrices;
  std::vector<double> weights;
  double size_bound = 0;

  std::int64_t denominator() const { return 12 * k; }
  std::size_t size() const { return matrices.size(); }
  /// I_{2^t} in the upper-left corner of a d_out x d_out zero matrix.
  Matrix target() const;
  PsdDecomposition decomposition() const;
  /// sum_i lambda_i Q_i / gamma = I, checked in integers.
  bool exact_identity() const;
  /// trace(Q_i) = gamma * 2^t for the t+1 non-zero members, checked in integers.
  bool exact_traces() const;
};

/// Requires d >= 8, gamma >= 1, 0 < eps < 1/16, k = floor(t/(96 eps)) >= 1 and
/// t <= 6k so the convex weights are non-negative.
LogNeededInstance log_needed_construction(int d, double gamma, double eps);

/// Contact data for the cube body conv(B_2^d U {+-w_i^j}).
///
/// w_i^j = e_i + (delta / sqrt(d'-1)) * embed_i(p^j - e_1), p^j the columns of
/// walsh(d'), embed_i placing simplex coordinates 2..d' into [d] \ {i} in
/// increasing order. Pair index (i, j) maps to i*d' + j.
struct CubeSimplexInstance {
  int d = 0;
  int d_prime = 0;
  double delta = 0;
  std::vector<std::vector<Vec>> w;

  std::size_t pair_index(int i, int j) const { return static_cast<std::size_t>(i) * d_prime + j; }
  /// u = w_i^j, v = e_i, weights 1/(d d'); with sign copies weights 1/(2 d d').
  ContactPairDecomposition pairs(bool sign_symmetric = false) const;
  /// d * (w_i^j (x) e_i) = d e_i (w_i^j)^T.
  Matrix member(int i, int j) const;
  double banach_mazur_radius() const;
};

CubeSimplexInstance cube_simplex_construction(int d, double delta);

/// Non-symmetric family for which symmetrization gives a large b.
///
/// Members: Q_1 = 4d e_1 (x) e_1, Q_2 = 4d e_2 (x) e_2 and for i >= 3 the four
/// d (e_i +- delta e_1) (x) (e_i +- delta e_2), each with weight 1/(4d),
/// followed by a zero matrix carrying the remaining weight 6/(4d).
PsdDecomposition symmetrization_counterexample(int d, double delta);

}  // namespace sparsify
