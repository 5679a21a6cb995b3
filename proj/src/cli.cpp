#include "muntz/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "muntz/analysis.hpp"
#include "muntz/polybasis.hpp"
#include "muntz/problem_e.hpp"
#include "muntz/remez.hpp"

namespace muntz::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kCsvDigitCap = 64;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string now_iso8601() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string log10_field(const BigReal& v) {
  return v.is_zero() ? "-inf" : format_fixed(to_log10_magnitude(v));
}

/// "a:b:step" or "a,b,c".
std::vector<long> parse_degree_list(const std::string& spec) {
  std::vector<long> out;
  if (spec.empty()) return out;
  auto to_long = [](const std::string& s) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(s, &used);
    } catch (const std::exception&) {
      throw UsageError("bad degree '" + s + "'");
    }
    if (used != s.size()) throw UsageError("bad degree '" + s + "'");
    return v;
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw UsageError("degree range must be a:b:step");
    const long a = to_long(parts[0]), b = to_long(parts[1]), step = to_long(parts[2]);
    if (step <= 0) throw UsageError("degree step must be positive");
    for (long d = a; d <= b; d += step) out.push_back(d);
  } else {
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(to_long(p));
  }
  return out;
}

void require_even_degree(long two_n, long minimum) {
  if (two_n < minimum) throw UsageError("degree must be at least " + std::to_string(minimum));
  if (two_n % 2 != 0) throw UsageError("degree must be even");
}

struct Context {
  fs::path out_dir;
  RemezConfig config;
  bool full_precision = false;
  RunManifest manifest;

  fs::path emit(const std::string& name, const std::string& body) {
    fs::create_directories(out_dir);
    const fs::path path = out_dir / name;
    write_atomic(path, body);
    manifest.outputs.push_back(path.string());
    return path;
  }
  fs::path emit_json(const std::string& name, const json& j) { return emit(name, j.dump(2) + "\n"); }

  void finish() {
    manifest.finished_at = now_iso8601();
    const std::string name = manifest.command + "_manifest.json";
    manifest.outputs.push_back((out_dir / name).string());
    fs::create_directories(out_dir);
    write_atomic(out_dir / name, manifest.to_json().dump(2) + "\n");
  }
};

json bound_report_json(const BoundReport& r) {
  return json{
      {"eps", to_scientific(r.eps, 20)},
      {"two_n", r.two_n},
      {"cmax_log10", r.cmax_log10},
      {"thm2_n_lower", to_scientific(r.thm2_n_lower, 20)},
      {"thm2_n_satisfied", r.thm2_n_satisfied},
      {"thm2_cmax_lower", to_scientific(r.thm2_cmax_lower, 20)},
      {"thm2_cmax_lower_log10", r.thm2_cmax_lower_log10},
      {"thm2_cmax_satisfied", r.thm2_cmax_satisfied},
      {"bernstein_eps_lower", to_scientific(r.bernstein_eps_lower, 20)},
      {"bernstein_satisfied", r.bernstein_satisfied},
      {"conjectured_n_lower", to_scientific(r.conjectured_n_lower, 20)},
      {"conjectured_n_satisfied", r.conjectured_n_satisfied},
      {"conjectured_cmax_lower", to_scientific(r.conjectured_cmax_lower, 20)},
      {"conjectured_cmax_lower_log10", r.conjectured_cmax_lower_log10},
      {"conjectured_cmax_satisfied", r.conjectured_cmax_satisfied},
      {"split_index", r.split_index},
      {"head_error_half", to_scientific(r.head_error_half, 12)},
      {"tail_sup_half", to_scientific(r.tail_sup_half, 12)},
      {"tail_bound_half", to_scientific(r.tail_bound_half, 12)},
  };
}

int cmd_solve(Context& ctx, long two_n, std::ostream& out) {
  require_even_degree(two_n, 0);
  ctx.manifest.parameters["two_n"] = std::to_string(two_n);
  const auto start = std::chrono::steady_clock::now();
  const ProblemESolution sol = solve_problem_e(two_n, ctx.config);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  const int digits = sol.approx.precision_digits;
  const int shown = ctx.full_precision ? digits : std::min(digits, kCsvDigitCap);

  std::vector<std::vector<std::string>> rows;
  for (long k = 0; k <= sol.n(); ++k) {
    const BigReal& c = sol.coefficient(k);
    rows.push_back({std::to_string(k), to_scientific(c, shown), log10_field(c)});
  }
  const std::string stem = "solve_" + std::to_string(two_n);
  ctx.emit(stem + "_coefficients.csv", csv_body({"k", "c_k", "log10_abs_c_k"}, rows));

  const json summary{
      {"two_n", two_n},
      {"n", sol.n()},
      {"eps", to_scientific(sol.eps, shown)},
      {"eps_log10", to_log10_magnitude(sol.eps)},
      {"cmax", to_scientific(sol.cmax, shown)},
      {"cmax_log10", sol.cmax_log10},
      {"cmax_k", static_cast<long>(sol.coeffs.argmax_abs_coeff() / 2)},
      {"iterations", sol.approx.iterations},
      {"defect", to_scientific(sol.approx.equioscillation_defect, 6)},
      {"defect_tolerance", to_scientific(sol.approx.defect_tolerance, 6)},
      {"precision_digits", digits},
      {"wall_time_ms", ms.count()},
  };
  ctx.emit_json(stem + "_summary.json", summary);

  json bounds;
  if (sol.eps < 0.5) {
    bounds = bound_report_json(verify_theorem2_certificate(sol));
    bounds["applicable"] = true;
  } else {
    bounds = json{{"applicable", false}, {"reason", "bounds require eps < 1/2"}, {"eps", to_scientific(sol.eps, 20)}};
  }
  ctx.emit_json(stem + "_bounds.json", bounds);
  out << summary.dump(2) << "\n";
  return kOk;
}

std::string eps_label(int e) { return "1e-" + std::to_string(e); }

int cmd_table1(Context& ctx, int max_computed, std::ostream& out) {
  if (max_computed < 1 || max_computed > 4) throw UsageError("--max-computed must be in 1..4");
  ctx.manifest.parameters["max_computed"] = std::to_string(max_computed);
  SolveCache cache(ctx.config);
  std::vector<std::vector<std::string>> rows;
  const Precision p = Precision::digits(40);
  for (int e = 1; e <= 8; ++e) {
    const BigReal target = pow10(-e, p);
    if (e <= max_computed) {
      const long d = minimal_degree(target, cache);
      rows.push_back({eps_label(e), std::to_string(d), format_fixed(cache.get(d).cmax_log10, 3), "computed"});
    } else {
      const long d = predicted_degree(target);
      rows.push_back({eps_label(e), std::to_string(d), format_fixed(predict_cmax_log10(d), 3), "predicted"});
    }
    out << rows.back()[0] << "  " << rows.back()[1] << "  " << rows.back()[2] << "  " << rows.back()[3] << "\n";
  }
  ctx.emit("table1.csv", csv_body({"eps", "minimal_degree", "cmax_log10", "mode"}, rows));
  return kOk;
}

int cmd_figure1(Context& ctx, const std::string& degree_spec, std::ostream& out) {
  const std::vector<long> degrees = parse_degree_list(degree_spec);
  if (degrees.empty()) throw UsageError("empty degree list");
  for (long d : degrees) require_even_degree(d, 2);
  ctx.manifest.parameters["degrees"] = degree_spec;
  SolveCache cache(ctx.config);
  const Figure1Dataset data = figure1_dataset(degrees, cache);

  std::vector<std::vector<std::string>> rows;
  for (const auto& r : data.rows) {
    rows.push_back({"coeff", std::to_string(r.two_n), std::to_string(r.k), format_fixed(r.log10_abs_ck)});
  }
  json curves = json::array();
  for (const auto& c : data.curves) {
    rows.push_back({"end_law", std::to_string(c.two_n), std::to_string(c.two_n / 2), format_fixed(c.end_law_log10)});
    rows.push_back({"peak_law", std::to_string(c.two_n), std::to_string(c.peak_k), format_fixed(c.peak_law_log10)});
    curves.push_back({{"two_n", c.two_n},
                      {"peak_k", c.peak_k},
                      {"peak_log10", c.peak_log10},
                      {"last_log10", c.last_log10},
                      {"eps_log10", c.eps_log10},
                      {"end_law_log10", c.end_law_log10},
                      {"peak_law_log10", c.peak_law_log10},
                      {"model_peak_log10", predict_cmax_log10(c.two_n)},
                      {"unimodal", c.unimodal}});
    if (!c.unimodal) out << "warning: curve 2n=" << c.two_n << " is not unimodal\n";
  }
  ctx.emit("figure1.csv", csv_body({"kind", "two_n", "k", "log10_abs_c_k"}, rows));
  ctx.emit_json("figure1_curves.json", curves);
  out << curves.dump(2) << "\n";
  return kOk;
}

int cmd_beta(Context& ctx, long n_max, int levels, std::ostream& out) {
  if (n_max < 20) throw UsageError("--n-max must be at least 20");
  if (levels < 0 || levels > 8) throw UsageError("--levels must be in 0..8");
  if (levels >= n_max / 10) throw UsageError("--levels must be below the ladder length n_max/10");
  ctx.manifest.parameters["n_max"] = std::to_string(n_max);
  ctx.manifest.parameters["levels"] = std::to_string(levels);
  SolveCache cache(ctx.config);
  const BetaEstimate est = estimate_beta(n_max, levels, cache);

  const BigReal reference = BigReal::parse(kBernsteinBeta, est.best_estimate.precision());
  const BigReal rel = abs(est.best_estimate - reference) / reference;
  json raw = json::array();
  for (const auto& [n, s] : est.raw_sequence) raw.push_back({{"n", n}, {"two_n_eps", to_scientific(s, 30)}});
  json last_row = json::array();
  for (const auto& v : est.richardson_table.back()) last_row.push_back(to_scientific(v, 30));
  const json result{
      {"n_max", n_max},
      {"levels", levels},
      {"best_estimate", to_scientific(est.best_estimate, 30)},
      {"est_correct_digits", est.est_correct_digits},
      {"correction_power", est.correction_power},
      {"power_detected", est.power_detected},
      {"stable", est.stable},
      {"reference_beta", kBernsteinBeta},
      {"agreement_digits", rel.is_zero() ? 30.0 : -to_log10_magnitude(rel)},
      {"raw_sequence", raw},
      {"richardson_last_row", last_row},
  };
  ctx.emit_json("beta.json", result);
  out << result.dump(2) << "\n";
  if (!est.stable) {
    out << "error: Richardson table is not converging\n";
    return kNumerical;
  }
  return kOk;
}

int cmd_bounds(Context& ctx, const std::string& eps_text, std::optional<long> two_n, std::ostream& out) {
  const Precision p = Precision::digits(40);
  BigReal eps(p);
  try {
    eps = BigReal::parse(eps_text, p);
  } catch (const std::invalid_argument&) {
    throw UsageError("--eps is not a number: " + eps_text);
  }
  if (!(eps > 0.0) || !(eps < 0.5)) throw UsageError("--eps must lie in (0, 1/2)");
  ctx.manifest.parameters["eps"] = eps_text;
  json result{
      {"eps", to_scientific(eps, 20)},
      {"thm2_n_lower", to_scientific(thm2_n_lower_bound(eps), 20)},
      {"thm2_cmax_lower", to_scientific(thm2_cmax_lower_bound(eps), 20)},
      {"thm2_cmax_lower_log10", thm2_cmax_lower_bound_log10(eps)},
      {"conjectured_n_lower", to_scientific(BigReal(1L, p) / (eps * 8L), 20)},
      {"predicted_degree", predicted_degree(eps)},
  };
  const long d = two_n.value_or(result["predicted_degree"].get<long>());
  require_even_degree(d, 2);
  if (two_n) ctx.manifest.parameters["two_n"] = std::to_string(*two_n);
  const ConjecturedBounds conj = conjectured_bounds(eps, d / 2);
  result["two_n"] = d;
  result["bernstein_eps_lower"] = to_scientific(bernstein_eps_lower_bound(d, p), 20);
  result["conjectured_cmax_lower_log10"] = conj.cmax_lower_log10;
  result["model_cmax_log10"] = predict_cmax_log10(d);
  ctx.emit_json("bounds.json", result);
  out << result.dump(2) << "\n";
  return kOk;
}

int cmd_fit(Context& ctx, long n_min, long n_max, long stride, std::ostream& out) {
  if (n_min < 1 || n_max < n_min + 10) throw UsageError("need 1 <= n_min and n_max >= n_min + 10");
  if (stride < 1) throw UsageError("--stride must be positive");
  ctx.manifest.parameters["n_min"] = std::to_string(n_min);
  ctx.manifest.parameters["n_max"] = std::to_string(n_max);
  ctx.manifest.parameters["stride"] = std::to_string(stride);
  SolveCache cache(ctx.config);
  const GrowthFit fit = fit_growth_model(n_min, n_max, cache, stride);
  json samples = json::array();
  for (const auto& [n, ln_cmax] : fit.samples) samples.push_back({{"n", n}, {"ln_cmax", ln_cmax}});
  const json result{{"n_min", n_min},
                    {"n_max", n_max},
                    {"fitted_constant", fit.fitted_constant},
                    {"fitted_exponent", fit.fitted_exponent},
                    {"fixed_rate", fit.fixed_rate},
                    {"residual_std", fit.residual_std},
                    {"samples", samples}};
  ctx.emit_json("fit.json", result);
  out << "constant=" << fit.fitted_constant << " exponent=" << fit.fitted_exponent
      << " residual_std=" << fit.residual_std << "\n";
  return kOk;
}

int cmd_cond(Context& ctx, long two_n, std::ostream& out) {
  require_even_degree(two_n, 2);
  ctx.manifest.parameters["two_n"] = std::to_string(two_n);
  const BigReal kappa = basis_condition_number(two_n, ctx.config.policy);
  const double lk = to_log10_magnitude(kappa);
  const json result{{"two_n", two_n},
                    {"kappa", to_scientific(kappa, 20)},
                    {"kappa_log10", lk},
                    {"silver_ratio_law_log10", static_cast<double>(two_n) * std::log10(1.0 + std::sqrt(2.0))}};
  ctx.emit_json("cond_" + std::to_string(two_n) + ".json", result);
  out << result.dump(2) << "\n";
  return kOk;
}

}  // namespace

json RunManifest::to_json() const {
  return json{{"command", command},
              {"parameters", parameters},
              {"started_at", started_at},
              {"finished_at", finished_at},
              {"tool_version", tool_version},
              {"precision_policy",
               {{"base_digits", policy.base_digits},
                {"guard_digits", policy.guard_digits},
                {"slope_per_degree", policy.slope()}}},
              {"outputs", outputs}};
}

void write_atomic(const fs::path& path, const std::string& body) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string());
    f << body;
    if (!f.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string csv_body(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string s;
  auto line = [&s](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += cells[i];
    }
    s += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return s;
}

std::string format_fixed(double v, int decimals) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Even-power minimax approximation of |x| with arbitrary-precision Remez"};
  app.require_subcommand(1);

  Context ctx;
  std::string out_dir;
  std::optional<int> precision_digits;
  int max_iterations = 100, divisor = 4, samples = 32;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory (default: $" + std::string(kOutDirEnv) + " or .)");
    sub->add_option("--precision-digits", precision_digits, "Override working precision in decimal digits");
    sub->add_option("--max-iterations", max_iterations, "Remez iteration cap")->check(CLI::PositiveNumber);
    sub->add_option("--defect-tol-divisor", divisor, "Converge at defect <= 10^(-digits/divisor)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--samples", samples, "Coarse samples per extremum bracket")->check(CLI::Range(3, 1 << 16));
    sub->add_flag("--full-precision", ctx.full_precision, "Write decimal strings at full working precision");
  };

  long two_n = -1;
  auto* solve = app.add_subcommand("solve", "Best even approximation of degree 2n; coefficients, summary, bounds");
  solve->add_option("--two-n", two_n, "Even degree 2n")->required();
  add_common(solve);

  int max_computed = 3;
  auto* table1 = app.add_subcommand("table1", "Minimal degree and max coefficient per accuracy 1e-1..1e-8");
  table1->add_option("--max-computed", max_computed, "Compute rows down to 1e-<value> (1..4); predict the rest");
  add_common(table1);

  std::string degrees = "28:140:28";
  auto* figure1 = app.add_subcommand("figure1", "Coefficient magnitude curves");
  figure1->add_option("--degrees", degrees, "Degrees as a:b:step or a,b,c");
  add_common(figure1);

  long n_max = 100;
  int levels = 4;
  auto* beta = app.add_subcommand("beta", "Richardson estimate of Bernstein's constant");
  beta->add_option("--n-max", n_max, "Largest n of the ladder 10, 20, ...");
  beta->add_option("--levels", levels, "Extrapolation levels (0..8)");
  add_common(beta);

  std::string eps_text;
  std::optional<long> bounds_two_n;
  auto* bounds = app.add_subcommand("bounds", "Lower bounds on degree and coefficients for an accuracy");
  bounds->add_option("--eps", eps_text, "Accuracy in (0, 1/2)")->required();
  bounds->add_option("--two-n", bounds_two_n, "Degree for the degree-dependent bounds");
  add_common(bounds);

  long n_min = 20, fit_n_max = 140, stride = 1;
  auto* fit = app.add_subcommand("fit", "Fit cmax ~ C (1+sqrt2)^{2n} / n^a");
  fit->add_option("--n-min", n_min, "Smallest n");
  fit->add_option("--n-max", fit_n_max, "Largest n");
  fit->add_option("--stride", stride, "Step in n");
  add_common(fit);

  long cond_two_n = -1;
  auto* cond = app.add_subcommand("cond", "Condition number of the even monomial basis");
  cond->add_option("--two-n", cond_two_n, "Even degree 2n")->required();
  add_common(cond);

  std::vector<std::string> argv_store{"muntz"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (out_dir.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    out_dir = env ? env : ".";
  }
  ctx.out_dir = out_dir;
  ctx.config.max_iterations = max_iterations;
  ctx.config.defect_tol_divisor = divisor;
  ctx.config.coarse_samples = samples;
  ctx.config.precision_digits = precision_digits;
  ctx.manifest.started_at = now_iso8601();
  ctx.manifest.policy = ctx.config.policy;
  if (precision_digits) ctx.manifest.parameters["precision_digits"] = std::to_string(*precision_digits);
  ctx.manifest.parameters["max_iterations"] = std::to_string(max_iterations);
  ctx.manifest.parameters["defect_tol_divisor"] = std::to_string(divisor);
  ctx.manifest.parameters["samples"] = std::to_string(samples);

  try {
    int code = kOk;
    if (solve->parsed()) {
      ctx.manifest.command = "solve";
      code = cmd_solve(ctx, two_n, out);
    } else if (table1->parsed()) {
      ctx.manifest.command = "table1";
      code = cmd_table1(ctx, max_computed, out);
    } else if (figure1->parsed()) {
      ctx.manifest.command = "figure1";
      code = cmd_figure1(ctx, degrees, out);
    } else if (beta->parsed()) {
      ctx.manifest.command = "beta";
      code = cmd_beta(ctx, n_max, levels, out);
    } else if (bounds->parsed()) {
      ctx.manifest.command = "bounds";
      code = cmd_bounds(ctx, eps_text, bounds_two_n, out);
    } else if (fit->parsed()) {
      ctx.manifest.command = "fit";
      code = cmd_fit(ctx, n_min, fit_n_max, stride, out);
    } else if (cond->parsed()) {
      ctx.manifest.command = "cond";
      code = cmd_cond(ctx, cond_two_n, out);
    }
    ctx.finish();
    return code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConvergenceFailure& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const ReferenceCollapse& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const DegenerateReference& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace muntz::cli
