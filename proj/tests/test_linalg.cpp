#include "doctest.h"
#include "oracles.hpp"
#include "sparsify/linalg.hpp"

#include <cmath>
#include <random>

using namespace sparsify;

TEST_CASE("outer is x -> <u,x> v") {
  Vec u(2), v(2), x(2);
  u << 1, 2;
  v << 3, -1;
  x << 0.5, -4;
  const Matrix m = outer(u, v);
  CHECK((m * x - u.dot(x) * v).norm() <= 1e-14);
  CHECK(m(0, 1) == 6);  // v_0 u_1
}

TEST_CASE("trace and squareness") {
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  CHECK(trace(a) == 5);
  CHECK_THROWS_AS(trace(Matrix(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(operator_norm(Matrix(3, 2)), std::invalid_argument);
}

TEST_CASE("operator norm matches closed forms") {
  std::mt19937_64 gen(11);
  for (int rep = 0; rep < 200; ++rep) {
    const Matrix a2 = oracle::random_matrix(2, 2, gen);
    CHECK(operator_norm(a2) == doctest::Approx(oracle::norm_2x2(a2)).epsilon(1e-12));
    const Matrix a3 = oracle::random_matrix(3, 3, gen);
    CHECK(operator_norm(a3) == doctest::Approx(oracle::norm_3x3(a3)).epsilon(1e-12));
  }
  Matrix rot(2, 2);
  rot << 0, -1, 1, 0;
  CHECK(operator_norm(rot) == doctest::Approx(1));
  CHECK(operator_norm(Matrix::Zero(4, 4)) == 0);
  Matrix diag = Matrix::Zero(3, 3);
  diag.diagonal() << 2, -5, 1;
  CHECK(operator_norm(diag) == doctest::Approx(5));
}

TEST_CASE("jacobi agrees with Eigen's solver") {
  std::mt19937_64 gen(5);
  for (int n : {1, 5, 40, 100}) {
    const Matrix b = oracle::random_matrix(n, n, gen);
    const Matrix s = b + b.transpose();
    const auto jac = jacobi_eigen(s);
    Eigen::SelfAdjointEigenSolver<Matrix> ref(s);
    const Vec expected = ref.eigenvalues().reverse();
    CHECK((jac.values - expected).cwiseAbs().maxCoeff() <= 1e-10 * (1 + expected.cwiseAbs().maxCoeff()));
    // A V = V diag(values)
    const Matrix residual = s * jac.vectors - jac.vectors * jac.values.asDiagonal();
    CHECK(residual.cwiseAbs().maxCoeff() <= 1e-9 * (1 + expected.cwiseAbs().maxCoeff()));
    for (Eigen::Index i = 1; i < jac.values.size(); ++i) CHECK(jac.values[i - 1] >= jac.values[i]);
  }
}

TEST_CASE("dispatch above the Jacobi limit keeps agreement") {
  std::mt19937_64 gen(8);
  const Matrix a = oracle::random_matrix(80, 80, gen);
  Eigen::JacobiSVD<Matrix> svd(a);
  CHECK(operator_norm(a) == doctest::Approx(svd.singularValues()[0]).epsilon(1e-10));
}

TEST_CASE("power iteration tracks the Jacobi norm") {
  std::mt19937_64 gen(3);
  for (int n : {2, 10, 30}) {
    const Matrix a = oracle::random_matrix(n, n, gen);
    CHECK(operator_norm_power(a) == doctest::Approx(operator_norm(a)).epsilon(1e-6));
  }
  CHECK(operator_norm_power(Matrix::Zero(3, 3)) == 0);
}

TEST_CASE("top singular pair") {
  std::mt19937_64 gen(2);
  const Matrix a = oracle::random_matrix(6, 6, gen);
  const auto pair = top_singular_pair(a);
  CHECK(pair.value == doctest::Approx(operator_norm(a)));
  CHECK((a * pair.right - pair.value * pair.left).norm() <= 1e-10);
  CHECK(pair.left.norm() == doctest::Approx(1));
}

TEST_CASE("schatten norms") {
  std::mt19937_64 gen(4);
  const Matrix a = oracle::random_matrix(7, 7, gen);
  CHECK(schatten_norm(a, 2) == doctest::Approx(a.norm()).epsilon(1e-12));
  Eigen::JacobiSVD<Matrix> svd(a);
  CHECK(schatten_norm(a, 1) == doctest::Approx(svd.singularValues().sum()).epsilon(1e-12));
  CHECK_THROWS_AS(schatten_norm(a, 0.5), std::invalid_argument);
  CHECK(schatten_norm(Matrix::Zero(3, 3), 3) == 0);
  // ||A|| <= ||A||_{S_p} <= d^{1/p} ||A||
  const double p = std::log(7.0);
  CHECK(schatten_norm(a, p) >= operator_norm(a));
  CHECK(schatten_norm(a, p) <= std::exp(1.0) * operator_norm(a));
  CHECK(effective_schatten_p(4) == 2);
  CHECK(effective_schatten_p(1000) == doctest::Approx(std::log(1000.0)));
}

TEST_CASE("psd test") {
  Matrix a(2, 2);
  a << 2, 1, 1, 2;
  CHECK(is_psd(a, 1e-12));
  a(0, 0) = 0.4;
  std::string why;
  CHECK_FALSE(is_psd(a, 1e-12, &why));
  CHECK(why.find("negative eigenvalue") != std::string::npos);
  Matrix asym(2, 2);
  asym << 1, 1, 0, 1;
  CHECK_FALSE(is_psd(asym, 1e-12, &why));
  CHECK(why.find("asymmetry") != std::string::npos);
  CHECK(is_psd(Matrix::Zero(3, 3), 1e-12));
}
