#include "doctest.h"
#include "oracles.hpp"
#include "sparsify/sampling.hpp"
#include "sparsify/verifiers.hpp"

#include <cmath>
#include <functional>

using namespace sparsify;

namespace {

// Minimum of the generic sample_error over all multisets of size 1..max_size.
double brute_force_min(const LogNeededInstance& inst, std::int64_t max_size, std::int64_t& visited) {
  const auto dec = inst.decomposition();
  const std::size_t n = inst.size();
  double best = INFINITY;
  std::vector<std::size_t> counts(n, 0);
  std::function<void(std::size_t, std::int64_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t used, std::int64_t left) {
    if (i == n) {
      if (used == 0) return;
      Multiset m;
      for (std::size_t j = 0; j < n; ++j) m.add(j, counts[j]);
      ++visited;
      best = std::min(best, sample_error(dec, m));
      return;
    }
    for (std::int64_t c = 0; c <= left; ++c) {
      counts[i] = static_cast<std::size_t>(c);
      rec(i + 1, used + c, left - c);
    }
    counts[i] = 0;
  };
  rec(0, 0, max_size);
  return best;
}

}  // namespace

TEST_CASE("l1 center gap by hand") {
  Multiset first;
  first.add(0);
  CHECK(l1_center_gap(2, 1, first) == doctest::Approx(0.5));
  Multiset zero;
  zero.add(2);
  CHECK(l1_center_gap(2, 1, zero) == doctest::Approx(1.0 / 6));
  Multiset mixed;
  mixed.add(0, 2);
  mixed.add(1);
  // coords (1/3, 1/6), center 1/24
  CHECK(l1_center_gap(2, 2, mixed) == doctest::Approx(7.0 / 24 + 3.0 / 24));
  Multiset big;
  big.add(0, 4);
  CHECK_THROWS(l1_center_gap(2, 1, big));
  CHECK_THROWS(l1_center_gap(2, 1, Multiset{}));
}

TEST_CASE("l1 gap bound holds exhaustively") {
  const auto check = verify_l1_gap_bound(6, 2);
  CHECK(check.violations == 0);
  CHECK(check.min_margin >= 0);
  // sum over t <= 6, k <= 2, 1 <= s <= 3k of C(t + s, s)
  std::int64_t expected = 0;
  for (int t = 1; t <= 6; ++t)
    for (int k = 1; k <= 2; ++k)
      for (int s = 1; s <= 3 * k; ++s) expected += static_cast<std::int64_t>(oracle::binomial(t + s, s));
  CHECK(check.multisets_checked == expected);
}

TEST_CASE("multiset counting") {
  for (std::int64_t n : {1, 3, 7})
    for (std::int64_t s : {1, 2, 9})
      CHECK(multiset_count(n, s, 1'000'000'000) == static_cast<std::int64_t>(oracle::binomial(n + s, s)) - 1);
  CHECK(multiset_count(50, 50, 1000) == 1000);
  CHECK(multiset_count(0, 5, 10) == 0);
}

TEST_CASE("search modes") {
  CHECK(parse_search_mode("exhaustive") == SearchMode::Exhaustive);
  CHECK(parse_search_mode("greedy") == SearchMode::Random);
  CHECK(std::string(to_string(SearchMode::Auto)) == "auto");
  CHECK_THROWS(parse_search_mode("fast"));
}

TEST_CASE("diagonal fast path matches the generic error") {
  const auto inst = log_needed_construction(16, 4, 1.0 / 64);
  Rng rng(5);
  CHECK(diagonal_fast_path_discrepancy(inst, 200, rng) <= 1e-12);
}

TEST_CASE("exhaustive minimum agrees with brute force") {
  for (double gamma : {1.0, 4.0}) {
    const auto inst = log_needed_construction(8, gamma, 1.0 / 64);
    SearchOptions opt;
    opt.mode = SearchMode::Exhaustive;
    const auto report = min_error_over_multisets(inst, opt);
    std::int64_t visited = 0;
    const double expected = brute_force_min(inst, report.max_size, visited);
    CHECK(report.certified);
    CHECK(report.multisets_examined == visited);
    CHECK(report.min_error == doctest::Approx(expected).epsilon(1e-12));
    CHECK(report.holds());
    CHECK(sample_error(inst.decomposition(), report.witness) == doctest::Approx(report.min_error));
    CHECK(static_cast<std::int64_t>(report.rows.size()) == report.max_size);
  }
}

TEST_CASE("random search never beats the certified minimum") {
  const auto inst = log_needed_construction(16, 4, 1.0 / 64);
  SearchOptions ex;
  ex.mode = SearchMode::Exhaustive;
  const auto exact = min_error_over_multisets(inst, ex);
  SearchOptions rnd;
  rnd.mode = SearchMode::Random;
  rnd.random_samples = 5000;
  const auto sampled = min_error_over_multisets(inst, rnd);
  CHECK_FALSE(sampled.certified);
  CHECK(sampled.min_error >= exact.min_error - 1e-12);
  CHECK(sampled.holds());
}

TEST_CASE("auto mode resolves by count") {
  const auto inst = log_needed_construction(8, 1, 1.0 / 32);
  const auto report = min_error_over_multisets(inst);
  CHECK(report.mode == SearchMode::Exhaustive);
  SearchOptions small;
  small.exhaustive_limit = 1;
  small.random_samples = 100;
  const auto inst4 = log_needed_construction(16, 4, 1.0 / 64);
  CHECK(min_error_over_multisets(inst4, small).mode == SearchMode::Random);
}

TEST_CASE("beta fits on the cube-simplex family") {
  const auto inst = cube_simplex_construction(8, 1);
  const auto full = best_beta_error(inst, full_support(inst));
  CHECK(full.error <= 1e-9);
  CHECK(full.least_squares_start);

  Rng rng(12);
  const Matrix identity = Matrix::Identity(8, 8);
  for (int rep = 0; rep < 5; ++rep) {
    const Support m = random_support(inst, 15, rng);
    CHECK(m.size() == 15);
    const auto fit = best_beta_error(inst, m, {500, 0});
    const double measured = operator_norm(Matrix(beta_combination(inst, m, fit.beta) - identity));
    CHECK(fit.error == doctest::Approx(measured).epsilon(1e-12));
    CHECK(fit.error <= fit.frobenius_error + 1e-12);
    CHECK(fit.error > 0.05);
    const auto cert = bm_certificate(inst, m, fit.beta, 0.05);
    CHECK(cert.value <= measured + 1e-9);
    CHECK(cert.consistent);
  }
}

TEST_CASE("certificate on a dense support") {
  const auto inst = cube_simplex_construction(16, 1);
  Rng rng(3);
  const Support m = random_support(inst, 200, rng);
  const auto fit = best_beta_error(inst, m, {300, 0});
  const auto cert = bm_certificate(inst, m, fit.beta, 0.01);
  const double measured = operator_norm(Matrix(beta_combination(inst, m, fit.beta) - Matrix::Identity(16, 16)));
  CHECK(cert.value <= measured + 1e-9);
  CHECK(cert.ell >= 0);
  CHECK(cert.consistent);
}

TEST_CASE("bm lower bound") {
  CHECK(bm_lower_bound(8, 1, 0.05) == doctest::Approx(16));
  CHECK(bm_lower_bound(100, 0.1, 0.01) == doctest::Approx(625));
  CHECK_THROWS(bm_lower_bound(8, 1, 0.6));
  CHECK_THROWS(bm_lower_bound(2, 1, 0.1));
}

TEST_CASE("supports") {
  const auto inst = cube_simplex_construction(5, 0.5);
  CHECK(full_support(inst).size() == 20);
  Rng rng(1);
  CHECK_THROWS(random_support(inst, 21, rng));
  auto m = random_support(inst, 20, rng);
  std::sort(m.begin(), m.end());
  CHECK(std::adjacent_find(m.begin(), m.end()) == m.end());
}
