#include "sparsify/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

namespace sparsify {

const char* version() { return SPARSIFY_VERSION; }

namespace {

template <class T>
Json optional_json(const std::optional<T>& x) {
  return x ? Json(*x) : Json(nullptr);
}

template <class T>
std::optional<T> optional_from(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

int require_dim(const RunConfig& cfg) {
  if (!cfg.dim) throw std::invalid_argument("--dim is required for " + cfg.command + " " + cfg.target);
  return *cfg.dim;
}

double require_eps(const RunConfig& cfg) {
  if (!cfg.eps) throw std::invalid_argument("--eps is required for " + cfg.command + " " + cfg.target);
  return *cfg.eps;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("input file '" + path + "' is not valid JSON");
  }
}

// What a subcommand produced before rendering.
struct Artifact {
  std::string property;
  bool held = true;
  Json result = Json::object();
  std::string csv_header;
  std::vector<std::string> csv_rows;
  std::vector<std::string> notes;  // extra "# " lines in CSV output
  bool csv_supported = true;
};

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return format_double(x);
}

Json num_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

double max_member_norm(const PsdDecomposition& dec) {
  double m = 0;
  for (const auto& q : dec.matrices) m = std::max(m, operator_norm(q));
  return m;
}

Artifact construct_log_needed(const RunConfig& cfg) {
  const auto inst = log_needed_construction(require_dim(cfg), cfg.gamma, require_eps(cfg));
  const auto dec = inst.decomposition();
  const auto validation = validate_psd_decomposition(dec, 1e-10);
  const double max_norm = max_member_norm(dec);
  Artifact a;
  a.property = "valid log-needed instance";
  a.held = validation.ok() && inst.exact_identity() && inst.exact_traces() && max_norm <= 2 * inst.gamma * (1 + 1e-12);
  a.result = to_json(inst);
  a.result["checks"] = {{"validation", validation.ok() ? "ok" : validation.to_string()},
                        {"exact_identity", inst.exact_identity()},
                        {"exact_traces", inst.exact_traces()},
                        {"max_member_norm", max_norm},
                        {"norm_bound", 2 * inst.gamma}};
  a.csv_supported = false;
  return a;
}

Artifact construct_cube_simplex(const RunConfig& cfg) {
  if (!cfg.delta) throw std::invalid_argument("--delta is required for construct cube-simplex");
  const auto inst = cube_simplex_construction(require_dim(cfg), *cfg.delta);
  const auto validation = validate_johns_position(inst.pairs(cfg.sign_symmetric));
  Artifact a;
  a.property = "contact pairs in John's position";
  a.held = validation.ok();
  a.result = to_json(inst, cfg.sign_symmetric);
  a.result["checks"] = {{"validation", validation.ok() ? "ok" : validation.to_string()}};
  a.csv_supported = false;
  return a;
}

Artifact construct_symm_counterexample(const RunConfig& cfg) {
  const int d = require_dim(cfg);
  const auto dec = symmetrization_counterexample(d, *cfg.delta);
  const auto validation = validate_psd_decomposition(dec);
  const auto sym = symmetrize(dec);
  Artifact a;
  a.property = "b > 0.01 d";
  a.held = validation.ok() && sym.b > 0.01 * d;
  a.result = to_json(dec);
  a.result["metadata"] = {{"construction", "symm-counterexample"},
                          {"params", {{"dim", d}, {"delta", *cfg.delta}}}};
  a.result["symmetrization"] = {{"gamma", sym.gamma}, {"b", sym.b}, {"threshold", 0.01 * d}};
  a.result["checks"] = {{"validation", validation.ok() ? "ok" : validation.to_string()}};
  a.csv_supported = false;
  return a;
}

PsdDecomposition load_or_build_psd(const RunConfig& cfg) {
  if (!cfg.in.empty()) return decomposition_from_json(read_json_file(cfg.in));
  const std::string family = cfg.family.empty() ? "cross-polytope" : cfg.family;
  if (family != "cross-polytope") throw std::invalid_argument("unknown --family '" + family + "' for sample rudelson");
  return cross_polytope_decomposition(require_dim(cfg));
}

std::int64_t resolve_rudelson_k(const RunConfig& cfg, const PsdDecomposition& dec, double eps) {
  return required_sample_size(dec.dim, gamma_of(dec), operator_norm(dec.target), eps, cfg.c);
}

Artifact sample_rudelson(const RunConfig& cfg) {
  const auto dec = load_or_build_psd(cfg);
  std::int64_t k;
  if (cfg.k) k = *cfg.k;
  else if (cfg.eps) k = resolve_rudelson_k(cfg, dec, *cfg.eps);
  else throw std::invalid_argument("sample rudelson needs --k or --eps");
  auto report = rudelson_experiment(dec, k, cfg.replicates, cfg.seed);
  report.eps = cfg.eps;
  Artifact a;
  a.property = cfg.eps ? "mean error <= eps" : "none (no --eps given)";
  a.held = !cfg.eps || report.summary.mean <= *cfg.eps;
  a.result = to_json(report);
  const auto lines = split_lines(to_csv(report));
  a.csv_header = lines.front();
  a.csv_rows.assign(lines.begin() + 1, lines.end());
  a.notes.push_back("mean " + num(report.summary.mean) + " std " + num(report.summary.std_dev));
  return a;
}

Artifact sample_nonsymm(const RunConfig& cfg) {
  const double eps = require_eps(cfg);
  ContactPairDecomposition cpd;
  if (!cfg.in.empty()) {
    cpd = contact_pairs_from_json(read_json_file(cfg.in));
  } else {
    const std::string family = cfg.family.empty() ? "ball-in-cube" : cfg.family;
    if (family != "ball-in-cube") throw std::invalid_argument("unknown --family '" + family + "' for sample nonsymm");
    cpd = ball_in_cube_pairs(require_dim(cfg));
  }
  const int d = cpd.dim;
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("--eps must lie in (0, 1)");
  if (d < 2) throw std::invalid_argument("--dim must be >= 2");
  if (!(cfg.c > 0)) throw std::invalid_argument("--c must be > 0");
  if (cfg.max_attempts < 1) throw std::invalid_argument("--max-attempts must be >= 1");
  // ceil(c d ln d / eps^2)
  const std::int64_t k = cfg.k ? *cfg.k : required_sample_size(d, d, 0, eps, cfg.c);
  Rng rng(cfg.seed);
  const auto search = nonsymm_find_multiset(cpd, k, eps, cfg.max_attempts, rng);
  const auto& g = search.guarantees;
  const double bal_bound = eps / std::sqrt(static_cast<double>(d));
  Artifact a;
  a.property = "errA <= eps and balances <= eps/sqrt(d)";
  a.held = search.found && g.err_a <= eps && g.balance_u <= bal_bound && g.balance_v <= bal_bound;
  a.result["params"] = {{"dim", d}, {"k", k}, {"eps", eps}, {"seed", cfg.seed}, {"rng", std::string(Rng::kName)}};
  a.result["found"] = search.found;
  a.result["attempts"] = search.attempts;
  a.result["sigma"] = search.sigma.to_string();
  a.result["guarantees"] = {{"err_a", g.err_a},
                            {"balance_u", g.balance_u},
                            {"balance_v", g.balance_v},
                            {"lifted_error", g.lifted_error},
                            {"balance_bound", bal_bound}};
  a.csv_header = "found,attempts,k,err_a,balance_u,balance_v,lifted_error";
  a.csv_rows.push_back(join({search.found ? "1" : "0", std::to_string(search.attempts), std::to_string(k), num(g.err_a),
                             num(g.balance_u), num(g.balance_v), num(g.lifted_error)}));
  return a;
}

Artifact verify_log_needed(const RunConfig& cfg) {
  const LogNeededInstance inst = !cfg.in.empty()
                                     ? log_needed_from_json(read_json_file(cfg.in))
                                     : log_needed_construction(require_dim(cfg), cfg.gamma, require_eps(cfg));
  SearchOptions options;
  options.mode = parse_search_mode(cfg.mode);
  options.exhaustive_limit = cfg.exhaustive_limit;
  options.random_samples = cfg.random_samples;
  options.seed = cfg.seed;
  const auto report = min_error_over_multisets(inst, options);
  Artifact a;
  a.property = "min error over bound-respecting multisets >= eps";
  a.held = report.holds();
  a.result["instance"] = {{"dim", inst.d_out}, {"gamma", inst.gamma}, {"eps", inst.eps}, {"t", inst.t},
                          {"k", inst.k}, {"size_bound", inst.size_bound}};
  const Json body = to_json(report);
  for (const auto& [key, value] : body.items()) a.result[key] = value;
  const auto lines = split_lines(to_csv(report));
  a.csv_header = lines.front();
  a.csv_rows.assign(lines.begin() + 1, lines.end());
  a.notes.push_back(std::string("mode ") + to_string(report.mode) + " certified " + (report.certified ? "true" : "false") +
                    " min_error " + num(report.min_error));
  return a;
}

Artifact verify_bm(const RunConfig& cfg) {
  const int d = require_dim(cfg);
  const double delta = *cfg.delta;
  const double eps = require_eps(cfg);
  const auto inst = cube_simplex_construction(d, delta);
  const double bound = bm_lower_bound(d, delta, eps);
  const int total = d * inst.d_prime;
  int size = cfg.support_size.value_or(std::max(1, static_cast<int>(std::ceil(bound)) - 1));
  if (size < 1 || size > total)
    throw std::invalid_argument("--support-size must lie in [1, " + std::to_string(total) + "]");
  if (cfg.supports < 0) throw std::invalid_argument("--supports must be >= 0");
  if (cfg.iterations < 1) throw std::invalid_argument("--iterations must be >= 1");
  const bool below_bound = size < bound;

  BetaFitOptions options;
  options.iterations = cfg.iterations;
  const auto full = best_beta_error(inst, full_support(inst), options);

  Artifact a;
  a.property = below_bound ? "full support exact; every support below the bound has error > eps; certificates sound"
                           : "full support exact; certificates sound";
  a.held = full.error <= 1e-9;
  a.csv_header = "support,size,best_error,frobenius_error,certificate,row,ell,excludes_eps";
  Json rows = Json::array();
  Rng rng(cfg.seed);
  double min_error = INFINITY;
  int unsound = 0, not_excluded = 0;
  const Matrix identity = Matrix::Identity(d, d);
  for (int s = 0; s < cfg.supports; ++s) {
    const Support support = random_support(inst, size, rng);
    const auto fit = best_beta_error(inst, support, options);
    const auto cert = bm_certificate(inst, support, fit.beta, eps);
    const double measured = operator_norm(Matrix(beta_combination(inst, support, fit.beta) - identity));
    min_error = std::min(min_error, fit.error);
    if (cert.value > measured + 1e-9) ++unsound;
    if (below_bound && !(fit.error > eps)) ++not_excluded;
    Json pairs = Json::array();
    for (const auto& [i, j] : support) pairs.push_back({i, j});
    rows.push_back({{"support", pairs},
                    {"best_error", fit.error},
                    {"frobenius_error", fit.frobenius_error},
                    {"certificate", cert.value},
                    {"row", cert.row},
                    {"ell", cert.ell},
                    {"analytic_bound", cert.analytic_bound},
                    {"analytic_applies", cert.analytic_applies},
                    {"excludes_eps", cert.excludes_eps}});
    a.csv_rows.push_back(join({std::to_string(s), std::to_string(size), num(fit.error), num(fit.frobenius_error),
                               num(cert.value), std::to_string(cert.row), std::to_string(cert.ell),
                               cert.excludes_eps ? "1" : "0"}));
  }
  a.held = a.held && unsound == 0 && not_excluded == 0;
  a.result["params"] = {{"dim", d}, {"d_prime", inst.d_prime}, {"delta", delta}, {"eps", eps},
                        {"support_size", size}, {"supports", cfg.supports}, {"seed", cfg.seed},
                        {"iterations", cfg.iterations}};
  a.result["bound"] = bound;
  a.result["full_support_error"] = full.error;
  a.result["min_support_error"] = num_json(min_error);
  a.result["unsound_certificates"] = unsound;
  a.result["supports_within_eps"] = not_excluded;
  a.result["rows"] = std::move(rows);
  a.notes.push_back("bound " + num(bound) + " full_support_error " + num(full.error));
  return a;
}

Artifact verify_l1_gap(const RunConfig& cfg) {
  if (cfg.t_max < 1 || cfg.k_max < 1) throw std::invalid_argument("--t-max and --k-max must be >= 1");
  const auto check = verify_l1_gap_bound(cfg.t_max, cfg.k_max);
  Artifact a;
  a.property = "l1 gap >= t/(12k) for every admissible sigma0";
  a.held = check.violations == 0;
  a.result = {{"t_max", cfg.t_max},
              {"k_max", cfg.k_max},
              {"multisets_checked", check.multisets_checked},
              {"violations", check.violations},
              {"min_margin", check.min_margin}};
  a.csv_header = "t_max,k_max,multisets_checked,violations,min_margin";
  a.csv_rows.push_back(join({std::to_string(cfg.t_max), std::to_string(cfg.k_max),
                             std::to_string(check.multisets_checked), std::to_string(check.violations),
                             num(check.min_margin)}));
  return a;
}

Artifact sweep_rudelson(const RunConfig& cfg) {
  if (cfg.dims.empty()) throw std::invalid_argument("--dims is required for sweep rudelson");
  if (cfg.ks.empty() == cfg.eps_values.empty())
    throw std::invalid_argument("sweep rudelson needs exactly one of --ks or --eps-values");
  const std::size_t columns = cfg.ks.empty() ? cfg.eps_values.size() : cfg.ks.size();
  if (columns < 2) throw std::invalid_argument("sweep rudelson needs at least two k values to fit a slope");

  Artifact a;
  a.property = "per-d slope of log(mean error) vs log k in [-0.6, -0.4] with R^2 >= 0.95";
  a.csv_header = "d,k,eps,replicates,mean,std,ci95_low,ci95_high";
  Json rows = Json::array(), fits = Json::array();
  for (int d : cfg.dims) {
    const auto dec = cross_polytope_decomposition(d);
    std::vector<double> log_k, log_mean;
    for (std::size_t col = 0; col < columns; ++col) {
      std::optional<double> eps;
      std::int64_t k;
      if (cfg.ks.empty()) {
        eps = cfg.eps_values[col];
        k = resolve_rudelson_k(cfg, dec, *eps);
      } else {
        k = cfg.ks[col];
      }
      // every cell reuses the master seed so curves share their random draws
      const auto report = rudelson_experiment(dec, k, cfg.replicates, cfg.seed);
      const auto& s = report.summary;
      log_k.push_back(std::log(static_cast<double>(k)));
      log_mean.push_back(std::log(s.mean));
      rows.push_back({{"d", d}, {"k", k}, {"eps", optional_json(eps)}, {"replicates", cfg.replicates},
                      {"mean", s.mean}, {"std", s.std_dev}, {"ci95_low", s.ci_low}, {"ci95_high", s.ci_high}});
      a.csv_rows.push_back(join({std::to_string(d), std::to_string(k), eps ? num(*eps) : "", std::to_string(cfg.replicates),
                                 num(s.mean), num(s.std_dev), num(s.ci_low), num(s.ci_high)}));
    }
    const auto fit = fit_line(log_k, log_mean);
    const bool ok = fit.slope >= -0.6 && fit.slope <= -0.4 && fit.r_squared >= 0.95;
    a.held = a.held && ok;
    fits.push_back({{"d", d}, {"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}, {"ok", ok}});
    a.notes.push_back("fit d " + std::to_string(d) + " slope " + num(fit.slope) + " r_squared " + num(fit.r_squared));
  }
  a.result["rows"] = std::move(rows);
  a.result["fits"] = std::move(fits);
  return a;
}

Artifact calibrate(const RunConfig& cfg) {
  const double eps = require_eps(cfg);
  const auto cal = calibrate_constant(cfg.dims, eps, cfg.quantile, cfg.replicates, cfg.seed);
  Artifact a;
  a.property = "doubling search converged";
  a.result["c_est"] = cal.c_est;
  a.result["doublings"] = cal.doublings;
  Json steps = Json::array();
  a.csv_header = "c,d,k,quantile_error,pass";
  for (const auto& step : cal.steps) {
    steps.push_back({{"c", step.c}, {"ks", step.ks}, {"quantile_errors", step.quantile_errors}, {"pass", step.pass}});
    for (std::size_t i = 0; i < cfg.dims.size(); ++i)
      a.csv_rows.push_back(join({num(step.c), std::to_string(cfg.dims[i]), std::to_string(step.ks[i]),
                                 num(step.quantile_errors[i]), step.pass ? "1" : "0"}));
  }
  a.result["steps"] = std::move(steps);
  a.notes.push_back("c_est " + num(cal.c_est));
  return a;
}

Artifact dispatch(const RunConfig& cfg) {
  const std::string key = cfg.command + " " + cfg.target;
  if (key == "construct log-needed") return construct_log_needed(cfg);
  if (key == "construct cube-simplex") return construct_cube_simplex(cfg);
  if (key == "construct symm-counterexample") return construct_symm_counterexample(cfg);
  if (key == "sample rudelson") return sample_rudelson(cfg);
  if (key == "sample nonsymm") return sample_nonsymm(cfg);
  if (key == "verify log-needed") return verify_log_needed(cfg);
  if (key == "verify bm") return verify_bm(cfg);
  if (key == "verify lemma41") return verify_l1_gap(cfg);
  if (key == "sweep rudelson") return sweep_rudelson(cfg);
  if (cfg.command == "calibrate") return calibrate(cfg);
  throw std::invalid_argument("unknown subcommand '" + key + "'");
}

RunConfig embedded_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file '" + path + "'");
  std::string first;
  std::getline(in, first);
  if (first.rfind("# ", 0) == 0) {
    const std::string marker = "# config ";
    for (std::string line; std::getline(in, line);)
      if (line.rfind(marker, 0) == 0) return config_from_json(Json::parse(line.substr(marker.size())));
    throw std::invalid_argument("'" + path + "' has no embedded config line");
  }
  const Json j = read_json_file(path);
  if (!j.contains("config")) throw std::invalid_argument("'" + path + "' has no embedded config");
  return config_from_json(j.at("config"));
}

}  // namespace

Json config_to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"target", c.target},
          {"dim", optional_json(c.dim)},
          {"gamma", c.gamma},
          {"eps", optional_json(c.eps)},
          {"delta", optional_json(c.delta)},
          {"k", optional_json(c.k)},
          {"replicates", c.replicates},
          {"seed", c.seed},
          {"mode", c.mode},
          {"format", c.format},
          {"in", c.in},
          {"family", c.family},
          {"dims", c.dims},
          {"ks", c.ks},
          {"eps_values", c.eps_values},
          {"c", c.c},
          {"max_attempts", c.max_attempts},
          {"supports", c.supports},
          {"support_size", optional_json(c.support_size)},
          {"t_max", c.t_max},
          {"k_max", c.k_max},
          {"quantile", c.quantile},
          {"sign_symmetric", c.sign_symmetric},
          {"exhaustive_limit", c.exhaustive_limit},
          {"random_samples", c.random_samples},
          {"iterations", c.iterations}};
}

RunConfig config_from_json(const Json& j) {
  RunConfig c;
  c.command = j.value("command", c.command);
  c.target = j.value("target", c.target);
  c.dim = optional_from<int>(j, "dim");
  c.gamma = j.value("gamma", c.gamma);
  c.eps = optional_from<double>(j, "eps");
  c.delta = optional_from<double>(j, "delta");
  c.k = optional_from<std::int64_t>(j, "k");
  c.replicates = j.value("replicates", c.replicates);
  c.seed = j.value("seed", c.seed);
  c.mode = j.value("mode", c.mode);
  c.format = j.value("format", c.format);
  c.in = j.value("in", c.in);
  c.family = j.value("family", c.family);
  c.dims = j.value("dims", c.dims);
  c.ks = j.value("ks", c.ks);
  c.eps_values = j.value("eps_values", c.eps_values);
  c.c = j.value("c", c.c);
  c.max_attempts = j.value("max_attempts", c.max_attempts);
  c.supports = j.value("supports", c.supports);
  c.support_size = optional_from<int>(j, "support_size");
  c.t_max = j.value("t_max", c.t_max);
  c.k_max = j.value("k_max", c.k_max);
  c.quantile = j.value("quantile", c.quantile);
  c.sign_symmetric = j.value("sign_symmetric", c.sign_symmetric);
  c.exhaustive_limit = j.value("exhaustive_limit", c.exhaustive_limit);
  c.random_samples = j.value("random_samples", c.random_samples);
  c.iterations = j.value("iterations", c.iterations);
  return c;
}

RunOutcome execute(const RunConfig& config) {
  RunOutcome outcome;
  try {
    if (config.command == "replay") {
      if (config.in.empty()) throw std::invalid_argument("replay needs --in");
      RunConfig inner = embedded_config(config.in);
      if (inner.command == "replay") throw std::invalid_argument("refusing to replay a replay");
      return execute(inner);
    }
    RunConfig cfg = config;
    cfg.out.clear();
    if (cfg.command == "verify" && cfg.target == "bm") {
      if (!cfg.dim) cfg.dim = 8;
      if (!cfg.delta) cfg.delta = 1.0;
      if (!cfg.eps) cfg.eps = 0.05;
    }
    if (cfg.command == "construct" && cfg.target == "symm-counterexample" && !cfg.delta) cfg.delta = 0.1;
    if (cfg.format.empty()) cfg.format = cfg.command == "sweep" ? "csv" : "json";
    if (cfg.format != "json" && cfg.format != "csv")
      throw std::invalid_argument("--format must be json or csv");
    if (cfg.replicates < 1) throw std::invalid_argument("--replicates must be >= 1");

    const Artifact a = dispatch(cfg);
    outcome.exit_code = a.held ? kExitHeld : kExitFailed;
    outcome.diagnostic = std::string("property ") + (a.held ? "held" : "FAILED") + ": " + a.property;
    if (cfg.format == "json") {
      Json j;
      j["version"] = version();
      j["config"] = config_to_json(cfg);
      j["property"] = {{"name", a.property}, {"held", a.held}};
      for (const auto& [key, value] : a.result.items()) j[key] = value;
      outcome.artifact = j.dump(1) + "\n";
    } else {
      if (!a.csv_supported) throw std::invalid_argument(cfg.command + " " + cfg.target + " emits JSON only");
      std::string text = std::string("# sparsify ") + version() + "\n";
      text += "# config " + config_to_json(cfg).dump() + "\n";
      text += "# property " + a.property + " held " + (a.held ? "true" : "false") + "\n";
      for (const auto& note : a.notes) text += "# " + note + "\n";
      text += a.csv_header + "\n";
      for (const auto& row : a.csv_rows) text += row + "\n";
      outcome.artifact = std::move(text);
    }
  } catch (const std::invalid_argument& e) {
    outcome = {kExitInvalid, "", std::string("invalid parameters: ") + e.what()};
  } catch (const std::domain_error& e) {
    outcome = {kExitInvalid, "", std::string("invalid parameters: ") + e.what()};
  } catch (const nlohmann::json::exception& e) {
    outcome = {kExitInvalid, "", std::string("invalid input: ") + e.what()};
  } catch (const std::runtime_error& e) {
    outcome = {kExitFailed, "", std::string("failed: ") + e.what()};
  }
  return outcome;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const RunOutcome outcome = execute(config);
  if (!outcome.artifact.empty()) {
    if (config.out.empty()) {
      out << outcome.artifact;
    } else {
      std::ofstream file(config.out, std::ios::binary);
      file << outcome.artifact;
      if (!file) {
        err << "error: cannot write '" << config.out << "'\n";
        return kExitInvalid;
      }
    }
  }
  if (outcome.exit_code == kExitHeld) {
    if (!config.out.empty()) err << outcome.diagnostic << '\n';
  } else {
    err << outcome.diagnostic << '\n';
  }
  return outcome.exit_code;
}

Calibration calibrate_constant(std::span<const int> dims, double eps, double target_quantile, int replicates,
                               std::uint64_t seed, double c0, int refine_steps) {
  if (dims.size() < 2) throw std::invalid_argument("calibrate_constant: need at least two dims");
  if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("calibrate_constant: eps must lie in (0, 1]");
  if (!(target_quantile > 0 && target_quantile <= 1))
    throw std::invalid_argument("calibrate_constant: quantile must lie in (0, 1]");
  if (!(c0 > 0)) throw std::invalid_argument("calibrate_constant: c0 must be > 0");
  for (int d : dims)
    if (d < 2) throw std::invalid_argument("calibrate_constant: every dim must be >= 2");

  Calibration cal;
  auto evaluate = [&](double c) {
    CalibrationStep step;
    step.c = c;
    step.pass = true;
    for (int d : dims) {
      const std::int64_t k = required_sample_size(d, d, 1, eps, c);
      const auto report = rudelson_experiment(cross_polytope_decomposition(d), k, replicates, seed);
      const double q = quantile(report.errors, target_quantile);
      step.ks.push_back(k);
      step.quantile_errors.push_back(q);
      step.pass = step.pass && q <= eps;
    }
    cal.steps.push_back(step);
    return step.pass;
  };

  double c = c0;
  if (evaluate(c)) {
    cal.c_est = c;
    return cal;
  }
  for (int doubling = 1; doubling <= 20; ++doubling) {
    c *= 2;
    cal.doublings = doubling;
    if (evaluate(c)) {
      double lo = c / 2, hi = c;
      for (int i = 0; i < refine_steps; ++i) {
        const double mid = std::sqrt(lo * hi);
        (evaluate(mid) ? hi : lo) = mid;
      }
      cal.c_est = hi;
      return cal;
    }
  }
  throw std::runtime_error("calibrate_constant: no c <= " + format_double(c) + " met eps within 20 doublings");
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Sparsification of identity decompositions: constructions, sampling and verifiers"};
  app.set_version_flag("--version", std::string(version()));
  RunConfig cfg;
  int dim = 0, support_size = 0;
  double eps = 0, delta = 0;
  std::int64_t k = 0;
  app.add_option("command", cfg.command, "construct | sample | verify | sweep | calibrate | replay")->required();
  app.add_option("target", cfg.target, "construct: log-needed | cube-simplex | symm-counterexample; "
                                      "sample: rudelson | nonsymm; verify: log-needed | bm | lemma41; sweep: rudelson");
  auto* dim_opt = app.add_option("--dim,-d", dim, "dimension d");
  app.add_option("--gamma", cfg.gamma, "norm bound gamma (log-needed)");
  auto* eps_opt = app.add_option("--eps", eps, "accuracy epsilon");
  auto* delta_opt = app.add_option("--delta", delta, "perturbation delta (cube-simplex, symm-counterexample)");
  auto* k_opt = app.add_option("--k,-k", k, "sample size k");
  app.add_option("--replicates", cfg.replicates, "Monte Carlo replicates");
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--mode", cfg.mode, "multiset search: auto | exhaustive | random");
  app.add_option("--format", cfg.format, "json | csv");
  app.add_option("--out,-o", cfg.out, "output file (default stdout)");
  app.add_option("--in,-i", cfg.in, "input file");
  app.add_option("--family", cfg.family, "built-in decomposition family");
  app.add_option("--dims", cfg.dims, "comma separated dimensions")->delimiter(',');
  app.add_option("--ks", cfg.ks, "comma separated sample sizes")->delimiter(',');
  app.add_option("--eps-values", cfg.eps_values, "comma separated accuracies (k from the sample size formula)")
      ->delimiter(',');
  app.add_option("--c", cfg.c, "constant c in the sample size formula");
  app.add_option("--max-attempts", cfg.max_attempts, "sampling attempts before giving up");
  app.add_option("--supports", cfg.supports, "random supports to test (verify bm)");
  auto* size_opt = app.add_option("--support-size", support_size, "support size |M| (verify bm)");
  app.add_option("--t-max", cfg.t_max, "largest t (verify lemma41)");
  app.add_option("--k-max", cfg.k_max, "largest k (verify lemma41)");
  app.add_option("--quantile", cfg.quantile, "target quantile (calibrate)");
  app.add_flag("--sign-symmetric", cfg.sign_symmetric, "add sign-flipped pairs (cube-simplex)");
  app.add_option("--exhaustive-limit", cfg.exhaustive_limit, "largest multiset count searched exhaustively");
  app.add_option("--random-samples", cfg.random_samples, "random multisets when not exhaustive");
  app.add_option("--iterations", cfg.iterations, "subgradient iterations (verify bm)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }
  if (dim_opt->count()) cfg.dim = dim;
  if (eps_opt->count()) cfg.eps = eps;
  if (delta_opt->count()) cfg.delta = delta;
  if (k_opt->count()) cfg.k = k;
  if (size_opt->count()) cfg.support_size = support_size;
  return run(cfg, std::cout, std::cerr);
}

}  // namespace sparsify
