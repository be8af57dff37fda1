#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsify/linalg.hpp"
#include "sparsify/multiset.hpp"

namespace sparsify {

inline constexpr double kDefaultValidationTol = 1e-9;

/// Convex combination target = sum_i weights[i] * matrices[i].
///
/// Weights are stored normalized. When `psd` is set every member is expected
/// to be positive semi-definite; otherwise members are arbitrary square
/// matrices (the non-symmetric setting).
struct PsdDecomposition {
  int dim = 0;
  std::vector<double> weights;
  std::vector<Matrix> matrices;
  Matrix target;
  bool psd = true;

  std::size_t size() const { return matrices.size(); }
};

/// Weighted contact pairs; member i contributes the diad u_i (x) v_i.
struct ContactPairDecomposition {
  int dim = 0;
  std::vector<double> weights;
  std::vector<Vec> u;
  std::vector<Vec> v;
  bool balanced = true;  // whether sum a_i u_i = sum a_i v_i = 0 is claimed

  std::size_t size() const { return u.size(); }
};

/// Pairs lifted to dimension dim = d+1: a_i = (v_i, 1/sqrt d), b_i = (u_i, 1/sqrt d).
struct LiftedPairs {
  int dim = 0;
  std::vector<Vec> a;
  std::vector<Vec> b;
  std::vector<double> weights;

  int base_dim() const { return dim - 1; }
  /// Member i as a matrix: d * (a_i (x) b_i) = d * b_i a_i^T.
  Matrix member(std::size_t i) const;
  PsdDecomposition as_decomposition() const;
};

struct SymmetrizationData {
  double gamma = 0;
  std::vector<Matrix> U;
  Matrix B;
  double b = 0;
};

struct Violation {
  std::string invariant;
  double residual = 0;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  double worst_residual() const;
  std::string to_string() const;
};

/// Normalizes weights whose sum is within 1e-9 of 1 and rejects everything else.
std::vector<double> normalize_weights(std::vector<double> weights);

PsdDecomposition make_decomposition(std::vector<double> weights, std::vector<Matrix> matrices,
                                    Matrix target, bool psd);
ContactPairDecomposition make_contact_pairs(std::vector<double> weights, std::vector<Vec> u,
                                            std::vector<Vec> v, bool balanced);

/// {d e_i (x) e_i, d (-e_i) (x) (-e_i)} with weights 1/(2d); target I.
PsdDecomposition cross_polytope_decomposition(int d);
/// u_i = v_i = +-e_i with weights 1/(2d): the unit ball inside the cube.
ContactPairDecomposition ball_in_cube_pairs(int d);
/// Q_i = d u_i (x) v_i, target I. Valid when the pairs satisfy the identity condition.
PsdDecomposition diad_decomposition(const ContactPairDecomposition& cpd);

ValidationReport validate_psd_decomposition(const PsdDecomposition& dec,
                                            double tol = kDefaultValidationTol);
/// Checks sum a_i u_i (x) v_i = I/d, <u_i,v_i> = 1 and, if flagged, the balance condition.
ValidationReport validate_johns_position(const ContactPairDecomposition& cpd,
                                         double tol = kDefaultValidationTol);

double gamma_of(const PsdDecomposition& dec);

/// U_i = (Q_i Q_i^T + Q_i^T Q_i) / (2 gamma), B = sum a_i U_i, b = ||B||.
SymmetrizationData symmetrize(const PsdDecomposition& dec);

LiftedPairs lift_pairs(const ContactPairDecomposition& cpd, double tol = kDefaultValidationTol);

struct ExtractedGuarantees {
  double err_a = 0;          // ||(d/k) sum u (x) v - I_d||
  double balance_u = 0;      // (1/k) ||sum u||
  double balance_v = 0;      // (1/k) ||sum v||
  double lifted_error = 0;   // ||(d/k) sum a (x) b - I_{d+1}||
};

/// Pulls the d-dimensional quantities out of a lifted sample. Each of err_a,
/// sqrt(d)*balance_u and sqrt(d)*balance_v is a compression of the lifted
/// error matrix and so cannot exceed lifted_error.
ExtractedGuarantees extract_guarantees(const LiftedPairs& lifted, const Multiset& sigma);

/// ceil(c * gamma * (1 + norm_a) * ln d / eps^2).
std::int64_t required_sample_size(double d, double gamma, double norm_a, double eps, double c);

}  // namespace sparsify
