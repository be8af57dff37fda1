#include "sparsify/decompositions.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sparsify {

namespace {

constexpr double kWeightSumTol = 1e-12;
constexpr double kRenormalizeWindow = 1e-9;

void check_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw std::invalid_argument(std::string(what) + ": " + std::to_string(a) + " weights for " +
                                std::to_string(b) + " members");
}

void check_weights(const std::vector<double>& w, ValidationReport& report) {
  double sum = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i])) {
      report.violations.push_back({"weight " + std::to_string(i) + " not finite", INFINITY});
      continue;
    }
    if (w[i] < 0) report.violations.push_back({"weight " + std::to_string(i) + " negative", -w[i]});
    sum += w[i];
  }
  if (std::abs(sum - 1.0) > kWeightSumTol)
    report.violations.push_back({"weights sum != 1", std::abs(sum - 1.0)});
}

}  // namespace

double ValidationReport::worst_residual() const {
  double worst = 0;
  for (const auto& v : violations) worst = std::max(worst, v.residual);
  return worst;
}

std::string ValidationReport::to_string() const {
  if (ok()) return "valid";
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << violations[i].invariant << " (residual " << violations[i].residual << ")";
  }
  return out.str();
}

std::vector<double> normalize_weights(std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("weights: empty");
  double sum = 0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0) throw std::invalid_argument("weights: must be finite and non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kRenormalizeWindow)
    throw std::invalid_argument("weights: sum " + std::to_string(sum) + " is not within 1e-9 of 1");
  for (double& w : weights) w /= sum;
  return weights;
}

PsdDecomposition make_decomposition(std::vector<double> weights, std::vector<Matrix> matrices,
                                    Matrix target, bool psd) {
  check_same_length(weights.size(), matrices.size(), "make_decomposition");
  PsdDecomposition dec;
  dec.dim = static_cast<int>(target.rows());
  for (const auto& m : matrices)
    if (m.rows() != dec.dim || m.cols() != dec.dim)
      throw std::invalid_argument("make_decomposition: member dimension differs from target");
  dec.weights = normalize_weights(std::move(weights));
  dec.matrices = std::move(matrices);
  dec.target = std::move(target);
  dec.psd = psd;
  return dec;
}

ContactPairDecomposition make_contact_pairs(std::vector<double> weights, std::vector<Vec> u,
                                            std::vector<Vec> v, bool balanced) {
  check_same_length(weights.size(), u.size(), "make_contact_pairs");
  check_same_length(u.size(), v.size(), "make_contact_pairs");
  if (u.empty()) throw std::invalid_argument("make_contact_pairs: no pairs");
  ContactPairDecomposition cpd;
  cpd.dim = static_cast<int>(u.front().size());
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i].size() != cpd.dim || v[i].size() != cpd.dim)
      throw std::invalid_argument("make_contact_pairs: pair " + std::to_string(i) + " has wrong dimension");
  cpd.weights = normalize_weights(std::move(weights));
  cpd.u = std::move(u);
  cpd.v = std::move(v);
  cpd.balanced = balanced;
  return cpd;
}

PsdDecomposition cross_polytope_decomposition(int d) {
  if (d < 1) throw std::invalid_argument("cross_polytope_decomposition: d must be positive");
  std::vector<Matrix> members;
  for (int i = 0; i < d; ++i) {
    const Vec e = Vec::Unit(d, i);
    members.push_back(d * outer(e, e));
    members.push_back(d * outer(Vec(-e), Vec(-e)));
  }
  return make_decomposition(std::vector<double>(2 * d, 1.0 / (2 * d)), std::move(members),
                            Matrix::Identity(d, d), true);
}

ContactPairDecomposition ball_in_cube_pairs(int d) {
  if (d < 1) throw std::invalid_argument("ball_in_cube_pairs: d must be positive");
  std::vector<Vec> u, v;
  for (int i = 0; i < d; ++i) {
    for (double sign : {1.0, -1.0}) {
      u.push_back(sign * Vec::Unit(d, i));
      v.push_back(sign * Vec::Unit(d, i));
    }
  }
  return make_contact_pairs(std::vector<double>(2 * d, 1.0 / (2 * d)), std::move(u), std::move(v), true);
}

PsdDecomposition diad_decomposition(const ContactPairDecomposition& cpd) {
  std::vector<Matrix> members;
  members.reserve(cpd.size());
  bool symmetric = true;
  for (std::size_t i = 0; i < cpd.size(); ++i) {
    members.push_back(cpd.dim * outer(cpd.u[i], cpd.v[i]));
    symmetric = symmetric && cpd.u[i] == cpd.v[i];
  }
  return make_decomposition(cpd.weights, std::move(members), Matrix::Identity(cpd.dim, cpd.dim), symmetric);
}

ValidationReport validate_psd_decomposition(const PsdDecomposition& dec, double tol) {
  check_same_length(dec.weights.size(), dec.matrices.size(), "validate_psd_decomposition");
  if (dec.target.rows() != dec.dim || dec.target.cols() != dec.dim)
    throw std::invalid_argument("validate_psd_decomposition: target is not dim x dim");
  ValidationReport report;
  if (dec.matrices.empty()) {
    report.violations.push_back({"no members", 0});
    return report;
  }
  check_weights(dec.weights, report);

  Matrix sum = Matrix::Zero(dec.dim, dec.dim);
  for (std::size_t i = 0; i < dec.size(); ++i) {
    const Matrix& q = dec.matrices[i];
    if (q.rows() != dec.dim || q.cols() != dec.dim)
      throw std::invalid_argument("validate_psd_decomposition: member " + std::to_string(i) +
                                  " is not dim x dim");
    if (!q.allFinite()) {
      report.violations.push_back({"member " + std::to_string(i) + " has non-finite entries", INFINITY});
      continue;
    }
    sum += dec.weights[i] * q;
    std::string why;
    if (dec.psd && !is_psd(q, tol, &why))
      report.violations.push_back({"member " + std::to_string(i) + " not PSD: " + why, 0});
  }
  const double residual = operator_norm(Matrix(sum - dec.target));
  if (!(residual <= tol)) report.violations.push_back({"weighted sum != target", residual});
  return report;
}

ValidationReport validate_johns_position(const ContactPairDecomposition& cpd, double tol) {
  check_same_length(cpd.weights.size(), cpd.u.size(), "validate_johns_position");
  check_same_length(cpd.u.size(), cpd.v.size(), "validate_johns_position");
  ValidationReport report;
  if (cpd.u.empty()) {
    report.violations.push_back({"no pairs", 0});
    return report;
  }
  check_weights(cpd.weights, report);
  const int d = cpd.dim;
  Matrix diads = Matrix::Zero(d, d);
  Vec sum_u = Vec::Zero(d), sum_v = Vec::Zero(d);
  double worst_dot = 0;
  for (std::size_t i = 0; i < cpd.size(); ++i) {
    if (cpd.u[i].size() != d || cpd.v[i].size() != d)
      throw std::invalid_argument("validate_johns_position: pair " + std::to_string(i) + " has wrong dimension");
    diads += cpd.weights[i] * outer(cpd.u[i], cpd.v[i]);
    sum_u += cpd.weights[i] * cpd.u[i];
    sum_v += cpd.weights[i] * cpd.v[i];
    worst_dot = std::max(worst_dot, std::abs(cpd.u[i].dot(cpd.v[i]) - 1.0));
  }
  const double h1 = operator_norm(Matrix(diads - Matrix::Identity(d, d) / d));
  if (!(h1 <= tol)) report.violations.push_back({"sum of weighted diads != I/d", h1});
  if (!(worst_dot <= tol)) report.violations.push_back({"<u_i, v_i> != 1", worst_dot});
  if (cpd.balanced) {
    if (!(sum_u.norm() <= tol)) report.violations.push_back({"weighted sum of u != 0", sum_u.norm()});
    if (!(sum_v.norm() <= tol)) report.violations.push_back({"weighted sum of v != 0", sum_v.norm()});
  }
  return report;
}

double gamma_of(const PsdDecomposition& dec) {
  if (dec.matrices.empty()) throw std::invalid_argument("gamma_of: empty decomposition");
  double gamma = 0;
  for (const auto& q : dec.matrices) gamma = std::max(gamma, operator_norm(q));
  return gamma;
}

SymmetrizationData symmetrize(const PsdDecomposition& dec) {
  check_same_length(dec.weights.size(), dec.matrices.size(), "symmetrize");
  SymmetrizationData out;
  out.gamma = gamma_of(dec);
  if (out.gamma == 0) throw std::domain_error("symmetrize: all members are zero (gamma = 0)");
  out.B = Matrix::Zero(dec.dim, dec.dim);
  out.U.reserve(dec.size());
  for (std::size_t i = 0; i < dec.size(); ++i) {
    const Matrix& q = dec.matrices[i];
    Matrix u = (q * q.transpose() + q.transpose() * q) / (2 * out.gamma);
    out.B += dec.weights[i] * u;
    out.U.push_back(std::move(u));
  }
  out.b = operator_norm(out.B);
  return out;
}

Matrix LiftedPairs::member(std::size_t i) const {
  return base_dim() * outer(a.at(i), b.at(i));
}

PsdDecomposition LiftedPairs::as_decomposition() const {
  std::vector<Matrix> members;
  members.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) members.push_back(member(i));
  return make_decomposition(weights, std::move(members), Matrix::Identity(dim, dim), false);
}

LiftedPairs lift_pairs(const ContactPairDecomposition& cpd, double tol) {
  ContactPairDecomposition balanced = cpd;
  balanced.balanced = true;
  const auto report = validate_johns_position(balanced, tol);
  if (!report.ok()) throw std::domain_error("lift_pairs: pairs are not in John's position: " + report.to_string());

  const int d = cpd.dim;
  const double tail = 1.0 / std::sqrt(static_cast<double>(d));
  LiftedPairs out;
  out.dim = d + 1;
  out.weights = cpd.weights;
  for (std::size_t i = 0; i < cpd.size(); ++i) {
    Vec a(d + 1), b(d + 1);
    a << cpd.v[i], tail;
    b << cpd.u[i], tail;
    out.a.push_back(std::move(a));
    out.b.push_back(std::move(b));
  }
  return out;
}

ExtractedGuarantees extract_guarantees(const LiftedPairs& lifted, const Multiset& sigma) {
  if (sigma.empty()) throw std::invalid_argument("extract_guarantees: empty multiset");
  if (sigma.index_bound() > lifted.a.size())
    throw std::out_of_range("extract_guarantees: multiset index out of range");
  const int d = lifted.base_dim();
  const double k = static_cast<double>(sigma.size());

  Matrix lifted_sum = Matrix::Zero(lifted.dim, lifted.dim);
  Matrix diads = Matrix::Zero(d, d);
  Vec sum_u = Vec::Zero(d), sum_v = Vec::Zero(d);
  for (const auto& [index, count] : sigma.items()) {
    const double m = static_cast<double>(count);
    lifted_sum += m * lifted.member(index);
    const auto u = lifted.b[index].head(d);
    const auto v = lifted.a[index].head(d);
    diads += m * outer(u, v);
    sum_u += m * u;
    sum_v += m * v;
  }
  ExtractedGuarantees g;
  g.lifted_error = operator_norm(Matrix(lifted_sum / k - Matrix::Identity(lifted.dim, lifted.dim)));
  g.err_a = operator_norm(Matrix(d / k * diads - Matrix::Identity(d, d)));
  g.balance_u = sum_u.norm() / k;
  g.balance_v = sum_v.norm() / k;
  return g;
}

std::int64_t required_sample_size(double d, double gamma, double norm_a, double eps, double c) {
  if (!(d >= 2)) throw std::invalid_argument("required_sample_size: d must be >= 2");
  if (!(gamma > 0)) throw std::invalid_argument("required_sample_size: gamma must be > 0");
  if (!(norm_a >= 0)) throw std::invalid_argument("required_sample_size: ||A|| must be >= 0");
  if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("required_sample_size: eps must lie in (0, 1]");
  if (!(c > 0)) throw std::invalid_argument("required_sample_size: c must be > 0");
  const double x = c * gamma * (1 + norm_a) * std::log(d) / (eps * eps);
  // absorb last-ulp noise from ln so that exact integers are not bumped up
  return static_cast<std::int64_t>(std::ceil(x * (1 - 1e-12)));
}

}  // namespace sparsify
