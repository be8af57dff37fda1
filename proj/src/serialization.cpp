#include "sparsify/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace sparsify {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("json: missing field '") + key + "'");
  return j.at(key);
}

double finite_number(const Json& j) {
  if (!j.is_number()) throw std::invalid_argument("json: expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw std::invalid_argument("json: non-finite number");
  return x;
}

std::vector<double> numbers(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("json: expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(finite_number(x));
  return out;
}

std::string format_or_inf(double x) { return std::isfinite(x) ? format_double(x) : (x > 0 ? "inf" : "-inf"); }

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("json: matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto row = numbers(j[static_cast<std::size_t>(r)]);
    if (static_cast<Eigen::Index>(row.size()) != cols) throw std::invalid_argument("json: ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

Json vec_to_json(const Vec& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Vec vec_from_json(const Json& j) {
  const auto xs = numbers(j);
  return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

Json to_json(const PsdDecomposition& dec) {
  Json j;
  j["dim"] = dec.dim;
  j["weights"] = dec.weights;
  Json mats = Json::array();
  for (const auto& m : dec.matrices) mats.push_back(matrix_to_json(m));
  j["matrices"] = std::move(mats);
  j["target"] = matrix_to_json(dec.target);
  j["psd"] = dec.psd;
  return j;
}

PsdDecomposition decomposition_from_json(const Json& j) {
  PsdDecomposition dec;
  dec.dim = require(j, "dim").get<int>();
  if (dec.dim < 1) throw std::invalid_argument("json: dim must be positive");
  dec.weights = numbers(require(j, "weights"));
  for (const auto& m : require(j, "matrices")) dec.matrices.push_back(matrix_from_json(m));
  dec.target = j.contains("target") ? matrix_from_json(j.at("target")) : Matrix::Identity(dec.dim, dec.dim);
  dec.psd = j.value("psd", true);
  if (dec.weights.size() != dec.matrices.size()) throw std::invalid_argument("json: weights and matrices differ in length");
  for (const auto& m : dec.matrices)
    if (m.rows() != dec.dim || m.cols() != dec.dim) throw std::invalid_argument("json: member is not dim x dim");
  if (dec.target.rows() != dec.dim || dec.target.cols() != dec.dim) throw std::invalid_argument("json: target is not dim x dim");
  return dec;
}

Json to_json(const ContactPairDecomposition& cpd) {
  Json j;
  j["dim"] = cpd.dim;
  j["weights"] = cpd.weights;
  Json u = Json::array(), v = Json::array();
  for (std::size_t i = 0; i < cpd.size(); ++i) {
    u.push_back(vec_to_json(cpd.u[i]));
    v.push_back(vec_to_json(cpd.v[i]));
  }
  j["pairs"] = {{"u", std::move(u)}, {"v", std::move(v)}};
  j["balanced"] = cpd.balanced;
  return j;
}

ContactPairDecomposition contact_pairs_from_json(const Json& j) {
  ContactPairDecomposition cpd;
  cpd.dim = require(j, "dim").get<int>();
  if (cpd.dim < 1) throw std::invalid_argument("json: dim must be positive");
  cpd.weights = numbers(require(j, "weights"));
  const Json& pairs = require(j, "pairs");
  for (const auto& x : require(pairs, "u")) cpd.u.push_back(vec_from_json(x));
  for (const auto& x : require(pairs, "v")) cpd.v.push_back(vec_from_json(x));
  cpd.balanced = j.value("balanced", false);
  if (cpd.u.size() != cpd.v.size() || cpd.u.size() != cpd.weights.size())
    throw std::invalid_argument("json: weights, u and v differ in length");
  for (std::size_t i = 0; i < cpd.size(); ++i)
    if (cpd.u[i].size() != cpd.dim || cpd.v[i].size() != cpd.dim)
      throw std::invalid_argument("json: pair vector has wrong dimension");
  return cpd;
}

Json to_json(const LogNeededInstance& inst) {
  Json j = to_json(inst.decomposition());
  j["metadata"] = {{"construction", "log-needed"},
                   {"params", {{"dim", inst.d_out}, {"gamma", inst.gamma}, {"eps", inst.eps}}},
                   {"t", inst.t},
                   {"k", inst.k},
                   {"size_bound", inst.size_bound},
                   {"a", vec_to_json(inst.a)}};
  return j;
}

LogNeededInstance log_needed_from_json(const Json& j) {
  const Json& meta = require(j, "metadata");
  if (meta.value("construction", std::string{}) != "log-needed")
    throw std::invalid_argument("json: not a log-needed instance");
  const Json& params = require(meta, "params");
  LogNeededInstance inst = log_needed_construction(require(params, "dim").get<int>(),
                                                   finite_number(require(params, "gamma")),
                                                   finite_number(require(params, "eps")));
  const PsdDecomposition stored = decomposition_from_json(j);
  bool same = stored.weights == inst.weights && stored.matrices.size() == inst.matrices.size();
  for (std::size_t i = 0; same && i < inst.matrices.size(); ++i) same = stored.matrices[i] == inst.matrices[i];
  if (!same) throw std::invalid_argument("json: instance matrices do not match their construction parameters");
  return inst;
}

Json to_json(const CubeSimplexInstance& inst, bool sign_symmetric) {
  Json j = to_json(inst.pairs(sign_symmetric));
  j["metadata"] = {{"construction", "cube-simplex"},
                   {"params", {{"dim", inst.d}, {"delta", inst.delta}, {"sign_symmetric", sign_symmetric}}},
                   {"d_prime", inst.d_prime},
                   {"banach_mazur_radius", inst.banach_mazur_radius()}};
  return j;
}

Json to_json(const ExperimentReport& report) {
  Json j;
  j["params"] = {{"dim", report.dim},
                 {"k", report.k},
                 {"eps", report.eps ? Json(*report.eps) : Json(nullptr)},
                 {"replicates", report.replicates},
                 {"seed", report.seed},
                 {"rng", report.rng_name}};
  j["replicate_seeds"] = report.replicate_seeds;
  j["errors"] = report.errors;
  j["summary"] = {{"mean", report.summary.mean},
                  {"std", report.summary.std_dev},
                  {"ci95_low", report.summary.ci_low},
                  {"ci95_high", report.summary.ci_high}};
  return j;
}

std::string to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "replicate,seed,error\n";
  for (std::size_t r = 0; r < report.errors.size(); ++r)
    out << r << ',' << report.replicate_seeds[r] << ',' << format_double(report.errors[r]) << '\n';
  return out.str();
}

Json to_json(const LowerBoundReport& report) {
  Json j;
  j["mode"] = to_string(report.mode);
  j["certified"] = report.certified;
  j["eps"] = report.eps;
  j["max_size"] = report.max_size;
  j["multisets_examined"] = report.multisets_examined;
  j["min_error"] = number_or_null(report.min_error);
  j["witness"] = report.witness.to_string();
  j["holds"] = report.holds();
  Json rows = Json::array();
  for (const auto& row : report.rows)
    rows.push_back({{"size", row.size}, {"min_error", number_or_null(row.min_error)}, {"witness", row.witness.to_string()}});
  j["sizes"] = std::move(rows);
  return j;
}

std::string to_csv(const LowerBoundReport& report) {
  std::ostringstream out;
  out << "size,min_error,witness\n";
  for (const auto& row : report.rows)
    out << row.size << ',' << format_or_inf(row.min_error) << ',' << row.witness.to_string() << '\n';
  return out.str();
}

}  // namespace sparsify
