#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsify {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vec = VectorX<double>;
using IntMatrix = MatrixX<std::int64_t>;

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty, got " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

}  // namespace detail

/// Rank-one operator x -> <u,x> v, stored as the matrix v u^T.
///
/// This orientation is used everywhere in the library: identities such as
/// sum_i alpha_i u_i (x) v_i = I/d are checked against v u^T. Operator norms
/// are transpose invariant, so bounds do not depend on the choice.
template <typename DerivedU, typename DerivedV>
MatrixX<typename DerivedU::Scalar> outer(const Eigen::MatrixBase<DerivedU>& u,
                                         const Eigen::MatrixBase<DerivedV>& v) {
  if (u.size() != v.size() || u.size() == 0)
    throw std::invalid_argument("outer: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                                std::to_string(v.size()) + ")");
  return v * u.transpose();
}

template <typename Derived>
typename Derived::Scalar trace(const Eigen::MatrixBase<Derived>& a) {
  detail::require_square(a, "trace");
  return a.trace();
}

/// Eigendecomposition of a symmetric matrix, eigenvalues sorted descending.
template <typename Scalar>
struct SymmetricEigen {
  VectorX<Scalar> values;
  MatrixX<Scalar> vectors;  // column i pairs with values[i]; empty if not requested
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for symmetric matrices.
///
/// Only the symmetric part of the input is used. Sweeps stop once the
/// off-diagonal Frobenius mass drops below machine epsilon times the
/// Frobenius norm of the matrix.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& s,
                                                      bool compute_vectors = true,
                                                      int max_sweeps = 100) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(s, "jacobi_eigen");
  const Eigen::Index n = s.rows();
  MatrixX<Scalar> a = (s + s.transpose()) / Scalar(2);
  MatrixX<Scalar> v;
  if (compute_vectors) v = MatrixX<Scalar>::Identity(n, n);

  const Scalar total = a.norm();
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  SymmetricEigen<Scalar> out;
  if (total == Scalar(0)) {
    out.values = VectorX<Scalar>::Zero(n);
    if (compute_vectors) out.vectors = std::move(v);
    return out;
  }

  auto off_mass = [&] {
    Scalar acc = 0;
    for (Eigen::Index q = 1; q < n; ++q)
      acc += a.col(q).head(q).squaredNorm();
    return std::sqrt(Scalar(2) * acc);
  };

  int sweep = 0;
  for (; sweep < max_sweeps && off_mass() > eps * total; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == Scalar(0)) continue;
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(a, p, q);
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        a(p, q) = a(q, p) = Scalar(0);
        if (compute_vectors) v.applyOnTheRight(p, q, rot);
      }
    }
  }
  out.sweeps = sweep;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
  out.values.resize(n);
  if (compute_vectors) out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = a(order[i], order[i]);
    if (compute_vectors) out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

/// Largest dimension handled by the Jacobi sweep in symmetric_eigenvalues();
/// above it the Householder tridiagonalization + implicit QR solver takes over.
inline constexpr Eigen::Index kJacobiMaxDim = 64;

/// Eigenvalues of a symmetric matrix, descending.
template <typename Derived>
VectorX<typename Derived::Scalar> symmetric_eigenvalues(const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(s, "symmetric_eigenvalues");
  if (s.rows() <= kJacobiMaxDim) return jacobi_eigen(s, false).values;
  const MatrixX<Scalar> sym = (s + s.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

/// Singular values (descending), the square roots of the eigenvalues of A^T A.
template <typename Derived>
VectorX<typename Derived::Scalar> singular_values(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(a, "singular_values");
  const MatrixX<Scalar> gram = a.transpose() * a;
  return symmetric_eigenvalues(gram).unaryExpr(
      [](Scalar x) { return std::sqrt(std::max(x, Scalar(0))); });
}

/// Largest singular value, from the eigenvalues of A^T A.
template <typename Derived>
typename Derived::Scalar operator_norm(const Eigen::MatrixBase<Derived>& a) {
  detail::require_square(a, "operator_norm");
  return singular_values(a)[0];
}

struct PowerIterationOptions {
  int max_iterations = 10000;
  double relative_tolerance = 1e-12;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

/// Largest singular value by power iteration on A^T A from a seeded random start.
///
/// Faster than the Jacobi path for large sweeps but converges slowly when the
/// top two singular values are close; prefer operator_norm() for ground truth.
double operator_norm_power(const Matrix& a, const PowerIterationOptions& options = {});

template <typename Scalar>
struct SingularPair {
  Scalar value = 0;
  VectorX<Scalar> left;   // A right = value * left
  VectorX<Scalar> right;
};

/// Top singular triple of A. Ties between equal top singular values resolve to
/// the eigenvector that the Jacobi sweep leaves in the lowest column index.
template <typename Derived>
SingularPair<typename Derived::Scalar> top_singular_pair(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(a, "top_singular_pair");
  const MatrixX<Scalar> gram = a.transpose() * a;
  auto eig = jacobi_eigen(gram, true);
  SingularPair<Scalar> out;
  out.value = std::sqrt(std::max(eig.values[0], Scalar(0)));
  out.right = eig.vectors.col(0);
  if (out.value > Scalar(0)) {
    out.left = (a * out.right) / out.value;
  } else {
    out.left = VectorX<Scalar>::Zero(a.rows());
    out.left[0] = Scalar(1);
  }
  return out;
}

/// (sum_i s_i(A)^p)^{1/p} over the singular values of A.
template <typename Derived>
typename Derived::Scalar schatten_norm(const Eigen::MatrixBase<Derived>& a, double p) {
  using Scalar = typename Derived::Scalar;
  if (!(p >= 1.0)) throw std::invalid_argument("schatten_norm: p must be >= 1, got " + std::to_string(p));
  const auto s = singular_values(a);
  const Scalar top = s[0];
  if (top == Scalar(0)) return Scalar(0);
  // scale by the top value to keep s^p in range for large p
  Scalar acc = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s[i] / top, Scalar(p));
  return top * std::pow(acc, Scalar(1.0 / p));
}

/// Schatten exponent used where the analysis takes p = ln d; clamped to 2 from below.
inline double effective_schatten_p(double d) { return std::max(2.0, std::log(d)); }

/// Symmetric within tol*(1+max|S|) entrywise and every eigenvalue >= -tol*(1+||S||).
/// Non-square input yields false and, when requested, a diagnostic.
template <typename Derived>
bool is_psd(const Eigen::MatrixBase<Derived>& s, double tol, std::string* diagnostic = nullptr) {
  using Scalar = typename Derived::Scalar;
  auto fail = [&](std::string why) {
    if (diagnostic) *diagnostic = std::move(why);
    return false;
  };
  if (s.rows() != s.cols() || s.rows() == 0) return fail("not square");
  if (!s.allFinite()) return fail("non-finite entry");
  const Scalar scale = s.cwiseAbs().maxCoeff();
  const Scalar asym = (s - s.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol * (1 + scale)) return fail("asymmetry " + std::to_string(asym));
  const auto values = symmetric_eigenvalues(s);
  const Scalar lowest = values[values.size() - 1];
  const Scalar norm = std::max(std::abs(values[0]), std::abs(lowest));
  if (lowest < -tol * (1 + norm)) return fail("negative eigenvalue " + std::to_string(lowest));
  if (diagnostic) diagnostic->clear();
  return true;
}

}  // namespace sparsify
