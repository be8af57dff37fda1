#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparsify/serialization.hpp"

namespace sparsify {

const char* version();

inline constexpr int kExitHeld = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitInvalid = 2;

/// Everything that determines an output file. The output path is not part of
/// the embedded config, so a replay can write elsewhere and still match.
struct RunConfig {
  std::string command;  // construct | sample | verify | sweep | calibrate | replay
  std::string target;   // e.g. log-needed, rudelson, bm
  std::optional<int> dim;
  double gamma = 1;
  std::optional<double> eps;
  std::optional<double> delta;
  std::optional<std::int64_t> k;
  int replicates = kDefaultReplicates;
  std::uint64_t seed = 1;
  std::string mode = "auto";
  std::string format;  // json | csv, empty picks the subcommand default
  std::string out;
  std::string in;
  std::string family;  // sample rudelson: cross-polytope; sample nonsymm: ball-in-cube
  std::vector<int> dims;
  std::vector<std::int64_t> ks;
  std::vector<double> eps_values;
  double c = 2;
  int max_attempts = 100;
  int supports = 200;
  std::optional<int> support_size;
  int t_max = 6;
  int k_max = 2;
  double quantile = 0.5;
  bool sign_symmetric = false;
  std::int64_t exhaustive_limit = 1'000'000;
  std::int64_t random_samples = 100'000;
  int iterations = 5000;
};

Json config_to_json(const RunConfig& config);
RunConfig config_from_json(const Json& j);

struct RunOutcome {
  int exit_code = kExitHeld;
  std::string artifact;    // file contents, empty on invalid parameters
  std::string diagnostic;  // single line
};

/// Runs one subcommand and renders its output without touching the filesystem
/// (except reading `in`).
RunOutcome execute(const RunConfig& config);

/// execute() plus writing the artifact to config.out, or to `out` when no path is set.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

struct CalibrationStep {
  double c = 0;
  std::vector<std::int64_t> ks;
  std::vector<double> quantile_errors;
  bool pass = false;
};

struct Calibration {
  double c_est = 0;
  int doublings = 0;
  std::vector<CalibrationStep> steps;
};

/// Smallest c (doubling from c0, then geometric bisection) for which the
/// target quantile of the cross-polytope sample error at
/// k = required_sample_size(d, d, 1, eps, c) is <= eps for every d.
/// Throws std::runtime_error when 20 doublings do not suffice.
Calibration calibrate_constant(std::span<const int> dims, double eps, double target_quantile, int replicates,
                               std::uint64_t seed, double c0 = 1.0 / 1024, int refine_steps = 8);

/// Parses argv with CLI11 and calls run(); returns the process exit status.
int main_entry(int argc, char** argv);

}  // namespace sparsify
