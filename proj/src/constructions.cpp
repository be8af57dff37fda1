#include "sparsify/constructions.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sparsify {

namespace {

int floor_log2(std::uint64_t x) { return static_cast<int>(std::bit_width(x)) - 1; }

}  // namespace

IntMatrix walsh(std::int64_t order) {
  if (order < 1 || !std::has_single_bit(static_cast<std::uint64_t>(order)))
    throw std::invalid_argument("walsh: order " + std::to_string(order) + " is not a power of two");
  IntMatrix h = IntMatrix::Ones(1, 1);
  while (h.rows() < order) {
    const Eigen::Index n = h.rows();
    IntMatrix next(2 * n, 2 * n);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h;
}

Vec l1_to_linf_embed(const Vec& x) {
  const int t = static_cast<int>(x.size());
  if (t < 1) throw std::invalid_argument("l1_to_linf_embed: t must be >= 1");
  if (t > 30) throw std::invalid_argument("l1_to_linf_embed: t too large");
  const std::int64_t d = std::int64_t{1} << t;
  Vec out(d);
  for (std::int64_t j = 0; j < d; ++j) {
    double acc = 0;
    for (int c = 0; c < t; ++c) acc += sign_entry(j, t, c) * x[c];
    out[j] = acc;
  }
  return out;
}

Matrix LogNeededInstance::target() const {
  Matrix target = Matrix::Zero(d_out, d_out);
  target.topLeftCorner(d_pow, d_pow).setIdentity();
  return target;
}

PsdDecomposition LogNeededInstance::decomposition() const {
  return make_decomposition(weights, matrices, target(), true);
}

bool LogNeededInstance::exact_identity() const {
  // 6k * (sum_{i<t} N_i/(6k) + (6k-t)/(6k) N_t) = 6k * 12k
  for (int j = 0; j < d_pow; ++j) {
    std::int64_t acc = (6 * k - t) * numerators[t][j];
    for (int i = 0; i < t; ++i) acc += numerators[i][j];
    if (acc != 72 * k * k) return false;
  }
  return true;
}

bool LogNeededInstance::exact_traces() const {
  for (int i = 0; i <= t; ++i) {
    std::int64_t acc = 0;
    for (auto n : numerators[i]) acc += n;
    if (acc != denominator() * d_pow) return false;
  }
  return true;
}

LogNeededInstance log_needed_construction(int d, double gamma, double eps) {
  if (d < 8) throw std::invalid_argument("log_needed_construction: d must be >= 8");
  if (!(gamma >= 1) || !std::isfinite(gamma)) throw std::invalid_argument("log_needed_construction: gamma must be >= 1");
  if (!(eps > 0 && eps < 1.0 / 16)) throw std::invalid_argument("log_needed_construction: eps must lie in (0, 1/16)");

  LogNeededInstance inst;
  inst.t = floor_log2(static_cast<std::uint64_t>(d));
  if (inst.t > 20) throw std::invalid_argument("log_needed_construction: d too large");
  inst.d_pow = 1 << inst.t;
  inst.d_out = d;
  inst.gamma = gamma;
  inst.eps = eps;
  const double k_real = inst.t / (96 * eps);
  inst.k = static_cast<std::int64_t>(std::floor(k_real * (1 + 1e-12)));
  if (inst.k < 1) throw std::invalid_argument("log_needed_construction: k = floor(t/(96 eps)) must be >= 1");
  if (6 * inst.k < inst.t)
    throw std::invalid_argument("log_needed_construction: k = " + std::to_string(inst.k) +
                                " < t/6, convex weights would be negative");
  inst.size_bound = gamma * inst.t / (96 * eps);

  const int t = inst.t;
  const std::int64_t k = inst.k;
  inst.a = Vec::Constant(t, 1.0 / static_cast<double>(12 * k));

  inst.numerators.assign(t + 2, std::vector<std::int64_t>(inst.d_pow, 0));
  for (int j = 0; j < inst.d_pow; ++j) {
    std::int64_t sign_sum = 0;
    for (int c = 0; c < t; ++c) sign_sum += sign_entry(j, t, c);
    // 12k * (<e_i/2 - a, s_j> + 1)
    for (int i = 0; i < t; ++i) inst.numerators[i][j] = 6 * k * sign_entry(j, t, i) - sign_sum + 12 * k;
    inst.numerators[t][j] = -sign_sum + 12 * k;
  }

  const double denom = static_cast<double>(inst.denominator());
  for (int i = 0; i < t + 2; ++i) {
    Matrix q = Matrix::Zero(d, d);
    for (int j = 0; j < inst.d_pow; ++j) q(j, j) = gamma * (static_cast<double>(inst.numerators[i][j]) / denom);
    inst.matrices.push_back(std::move(q));
  }
  const double lambda = 1.0 / (6.0 * static_cast<double>(k));
  for (int i = 0; i < t; ++i) inst.weights.push_back(lambda / gamma);
  inst.weights.push_back(static_cast<double>(6 * k - t) / (6.0 * static_cast<double>(k)) / gamma);
  inst.weights.push_back(1.0 - 1.0 / gamma);
  inst.weights = normalize_weights(std::move(inst.weights));
  return inst;
}

ContactPairDecomposition CubeSimplexInstance::pairs(bool sign_symmetric) const {
  std::vector<double> weights;
  std::vector<Vec> u, v;
  const double weight = 1.0 / (static_cast<double>(d) * d_prime * (sign_symmetric ? 2 : 1));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d_prime; ++j) {
      u.push_back(w[i][j]);
      v.push_back(Vec::Unit(d, i));
      weights.push_back(weight);
      if (sign_symmetric) {
        u.push_back(-w[i][j]);
        v.push_back(-Vec::Unit(d, i));
        weights.push_back(weight);
      }
    }
  }
  return make_contact_pairs(std::move(weights), std::move(u), std::move(v), sign_symmetric);
}

Matrix CubeSimplexInstance::member(int i, int j) const {
  return d * outer(w.at(i).at(j), Vec::Unit(d, i));
}

double CubeSimplexInstance::banach_mazur_radius() const { return std::sqrt(1 + delta * delta); }

CubeSimplexInstance cube_simplex_construction(int d, double delta) {
  if (d <= 2) throw std::invalid_argument("cube_simplex_construction: d must be > 2");
  if (!(delta > 0 && delta < std::sqrt(d / 2.0 - 1)))
    throw std::invalid_argument("cube_simplex_construction: delta must lie in (0, sqrt(d/2 - 1))");
  CubeSimplexInstance inst;
  inst.d = d;
  inst.d_prime = 1 << floor_log2(static_cast<std::uint64_t>(d));
  inst.delta = delta;
  const IntMatrix h = walsh(inst.d_prime);
  const double scale = delta / std::sqrt(static_cast<double>(inst.d_prime - 1));
  inst.w.resize(d);
  for (int i = 0; i < d; ++i) {
    std::vector<int> slots;
    for (int c = 0; c < d; ++c)
      if (c != i) slots.push_back(c);
    for (int j = 0; j < inst.d_prime; ++j) {
      Vec w = Vec::Unit(d, i);
      // p^j - e_1 vanishes in the first coordinate since row 1 of H is all ones
      for (int r = 1; r < inst.d_prime; ++r) w[slots[r - 1]] += scale * static_cast<double>(h(r, j));
      inst.w[i].push_back(std::move(w));
    }
  }
  return inst;
}

PsdDecomposition symmetrization_counterexample(int d, double delta) {
  if (d < 3) throw std::invalid_argument("symmetrization_counterexample: d must be >= 3");
  if (!(delta >= 0) || !std::isfinite(delta)) throw std::invalid_argument("symmetrization_counterexample: delta must be >= 0");
  const Vec e1 = Vec::Unit(d, 0), e2 = Vec::Unit(d, 1);
  const double weight = 1.0 / (4.0 * d);
  std::vector<Matrix> members;
  std::vector<double> weights;
  members.push_back(4.0 * d * outer(e1, e1));
  members.push_back(4.0 * d * outer(e2, e2));
  weights.assign(2, weight);
  for (int i = 2; i < d; ++i) {
    const Vec e = Vec::Unit(d, i);
    for (double su : {1.0, -1.0}) {
      for (double sv : {1.0, -1.0}) {
        members.push_back(static_cast<double>(d) * outer(Vec(e + su * delta * e1), Vec(e + sv * delta * e2)));
        weights.push_back(weight);
      }
    }
  }
  members.push_back(Matrix::Zero(d, d));
  weights.push_back(6.0 / (4.0 * d));
  return make_decomposition(std::move(weights), std::move(members), Matrix::Identity(d, d), false);
}

}  // namespace sparsify
