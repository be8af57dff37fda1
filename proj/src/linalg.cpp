#include "sparsify/linalg.hpp"

#include <random>

namespace sparsify {

double operator_norm_power(const Matrix& a, const PowerIterationOptions& options) {
  detail::require_square(a, "operator_norm_power");
  const Eigen::Index n = a.cols();
  std::mt19937_64 gen(options.seed);
  Vec x(n);
  for (Eigen::Index i = 0; i < n; ++i)
    x[i] = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
  if (x.norm() == 0.0) x.setOnes();
  x.normalize();

  double lambda = 0.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    const Vec y = a.transpose() * (a * x);
    const double next = x.dot(y);
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    x = y / ny;
    if (std::abs(next - lambda) <= options.relative_tolerance * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

}  // namespace sparsify
