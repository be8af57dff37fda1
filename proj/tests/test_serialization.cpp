#include "doctest.h"
#include "sparsify/serialization.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

using namespace sparsify;

TEST_CASE("format_double round-trips") {
  for (double x : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23, std::numeric_limits<double>::denorm_min()}) {
    const std::string text = format_double(x);
    CHECK(std::strtod(text.c_str(), nullptr) == x);
  }
  CHECK(format_double(0.25) == "0.25");
}

TEST_CASE("decomposition JSON round-trip is bit exact") {
  const auto inst = log_needed_construction(12, 4, 1.0 / 64);
  const auto dec = inst.decomposition();
  const Json j = Json::parse(to_json(dec).dump());
  const auto back = decomposition_from_json(j);
  CHECK(back.dim == dec.dim);
  CHECK(back.weights == dec.weights);
  CHECK(back.target == dec.target);
  for (std::size_t i = 0; i < dec.size(); ++i) CHECK(back.matrices[i] == dec.matrices[i]);
}

TEST_CASE("contact pairs round-trip") {
  const auto inst = cube_simplex_construction(5, 0.7);
  const auto cpd = inst.pairs(true);
  const auto back = contact_pairs_from_json(Json::parse(to_json(inst, true).dump()));
  CHECK(back.balanced);
  CHECK(back.weights == cpd.weights);
  for (std::size_t i = 0; i < cpd.size(); ++i) {
    CHECK(back.u[i] == cpd.u[i]);
    CHECK(back.v[i] == cpd.v[i]);
  }
}

TEST_CASE("log-needed files are rebuilt and checked") {
  const auto inst = log_needed_construction(8, 1, 1.0 / 32);
  Json j = Json::parse(to_json(inst).dump());
  const auto back = log_needed_from_json(j);
  CHECK(back.k == inst.k);
  CHECK(back.numerators == inst.numerators);
  j["matrices"][1][0][0] = 0.5;
  CHECK_THROWS_AS(log_needed_from_json(j), std::invalid_argument);
  Json other = to_json(cube_simplex_construction(4, 0.5), false);
  CHECK_THROWS_AS(log_needed_from_json(other), std::invalid_argument);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(decomposition_from_json(Json::object()), std::invalid_argument);
  Json j = to_json(cross_polytope_decomposition(2));
  j["weights"].push_back(0.1);
  CHECK_THROWS_AS(decomposition_from_json(j), std::invalid_argument);
  j = to_json(cross_polytope_decomposition(2));
  j["matrices"][0][0] = Json::array({1.0});
  CHECK_THROWS_AS(decomposition_from_json(j), std::invalid_argument);
  j = to_json(cross_polytope_decomposition(2));
  j["weights"][0] = "x";
  CHECK_THROWS_AS(decomposition_from_json(j), std::invalid_argument);
}

TEST_CASE("report CSV layout") {
  const auto report = rudelson_experiment(cross_polytope_decomposition(4), 10, 3, 5);
  const std::string csv = to_csv(report);
  CHECK(csv.rfind("replicate,seed,error\n0,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  const Json j = to_json(report);
  CHECK(j["errors"].size() == 3);
  CHECK(j["params"]["eps"].is_null());

  const auto lb = min_error_over_multisets(log_needed_construction(8, 4, 1.0 / 64));
  const std::string lb_csv = to_csv(lb);
  CHECK(lb_csv.rfind("size,min_error,witness\n1,", 0) == 0);
  CHECK(to_json(lb)["holds"] == true);
}
