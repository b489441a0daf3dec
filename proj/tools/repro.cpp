// Command-line front end: R0, trichotomy verdicts, curves, Leslie truncations,
// simulated growth and the randomized self test.

#include "repro/dynamics.hpp"
#include "repro/harness.hpp"
#include "repro/leslie.hpp"
#include "repro/model_file.hpp"
#include "repro/resolvent.hpp"
#include "repro/spectral.hpp"
#include "repro/trichotomy.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace repro;
using nlohmann::json;

constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitSelftestFailed = 3;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct Common {
  std::string model_path;
  Index order = 64;  // truncation size when a Leslie model is used as a split
};

SplitSystem<double> as_split(const ParsedModel& pm, Index order) {
  return pm.is_split() ? pm.split() : truncate(pm.leslie(), order, pm.tol);
}

json spectral_json(const SpectralResult<double>& r) {
  return {{"value", r.radius},
          {"method", to_string(r.method)},
          {"iterations", r.iterations},
          {"residual", r.residual}};
}

int cmd_r0(const Common& c, bool as_json) {
  const auto pm = parse_model_file(c.model_path);
  const auto sys = as_split(pm, c.order);
  const auto R0 = r0(sys, pm.tol);
  const auto rA = spectral_radius(sys.A(), pm.tol);
  if (as_json) {
    json doc = model_to_json(pm);
    doc["result"] = {{"r0", spectral_json(R0)},
                     {"rA", spectral_json(rA)},
                     {"rT", spectral_json(sys.transition_radius())}};
    if (!pm.is_split()) {
      doc["result"]["order"] = c.order;
      doc["result"]["closed_form_r0"] = closed_form_r0(pm.leslie()).value;
    }
    std::cout << doc.dump(2) << "\n";
    return 0;
  }
  std::cout << "R0   = " << num(R0.radius) << "\n"
            << "r(A) = " << num(rA.radius) << "\n"
            << "r(T) = " << num(sys.rT()) << "\n"
            << "R0 method:   " << to_string(R0.method) << ", " << R0.iterations
            << " iterations, residual " << num(R0.residual) << "\n"
            << "r(A) method: " << to_string(rA.method) << ", " << rA.iterations
            << " iterations, residual " << num(rA.residual) << "\n";
  if (!pm.is_split()) {
    std::cout << "closed-form R0 = " << num(closed_form_r0(pm.leslie()).value)
              << " (truncation order " << c.order << ")\n";
  }
  return 0;
}

std::string verdict_line(const TrichotomyVerdict<double>& v) {
  const std::string r0s = "R0=" + num(v.r0);
  const std::string ras = "r(A)=" + num(v.rA);
  switch (v.kase) {
    case TrichotomyCase::Supercritical:
      return "case (a): " + r0s + (v.strict ? " > " : " ≥ ") + ras + " > 1";
    case TrichotomyCase::Critical:
      return "case (b): " + r0s + " = " + ras + " = 1";
    case TrichotomyCase::Subcritical:
      return "case (c): " + r0s + (v.strict ? " < " : " ≤ ") + ras + " < 1";
  }
  return "case (?)";
}

int cmd_classify(const Common& c, bool strict, bool no_case_exit, bool as_json) {
  const auto pm = parse_model_file(c.model_path);
  const auto sys = as_split(pm, c.order);
  const auto v = strict ? classify_strict(sys, pm.tol) : classify(sys, pm.tol);
  std::vector<std::string> unmet;
  for (auto p : v.unmet) unmet.emplace_back(to_string(p));

  if (as_json) {
    json doc = model_to_json(pm);
    doc["result"] = {{"case", case_label(v.kase)},
                     {"r0", v.r0},
                     {"rA", v.rA},
                     {"strict", v.strict},
                     {"margins", {v.r0_margin, v.rA_margin}},
                     {"boundary_flag", v.boundary_flag},
                     {"unmet_preconditions", unmet}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << verdict_line(v) << "\n";
    if (v.boundary_flag) std::cout << "warning: value within tol_eq of 1\n";
    if (strict) {
      std::cout << "strict: " << (v.strict ? "certified" : "not certified");
      for (std::size_t i = 0; i < unmet.size(); ++i) {
        std::cout << (i == 0 ? " (" : ", ") << unmet[i];
      }
      std::cout << (unmet.empty() ? "" : ")") << "\n";
    }
  }
  if (no_case_exit) return 0;
  switch (v.kase) {
    case TrichotomyCase::Supercritical: return 10;
    case TrichotomyCase::Critical: return 11;
    case TrichotomyCase::Subcritical: return 12;
  }
  return 0;
}

int cmd_curve(const Common& c, double lo, double hi, Index samples) {
  const auto pm = parse_model_file(c.model_path);
  const auto sys = as_split(pm, c.order);
  const auto cs = curve(sys, lo, hi, samples, pm.tol);
  std::cout << "lambda\tradius\n";
  for (const auto& p : cs.points) std::cout << num(p.lambda) << "\t" << num(p.radius) << "\n";
  std::cerr << "monotone_ok=" << (cs.monotone_ok ? "true" : "false")
            << " convex_ok=" << (cs.convex_ok ? "true" : "false")
            << " max_violation=" << num(cs.max_violation) << "\n";
  return 0;
}

int cmd_leslie(const Common& c, const std::vector<Index>& sizes, bool as_json) {
  const auto pm = parse_model_file(c.model_path);
  if (pm.is_split()) {
    throw Error(ErrorCode::ValidationError, "kind: leslie command needs a leslie model");
  }
  const auto& model = pm.leslie();
  const auto exact = closed_form_r0(model);
  const auto bound = survival_radius_bound(model);
  const auto series = sizes.empty() ? decltype(truncated_r0_series(model, {1}, pm.tol)){}
                                    : truncated_r0_series(model, sizes, pm.tol);
  if (as_json) {
    json doc = model_to_json(pm);
    json rows = json::array();
    for (const auto& [n, value] : series) {
      rows.push_back({{"n", n},
                      {"r0", value},
                      {"gap", exact.value - value},
                      {"tail_bound", truncation_tail_bound(model, n)}});
    }
    doc["result"] = {{"closed_form_r0", exact.value},
                     {"error_bound", exact.error_bound},
                     {"survival_bound", {{"bound", bound.bound}, {"m", bound.m}}},
                     {"truncations", rows}};
    std::cout << doc.dump(2) << "\n";
    return 0;
  }
  std::cout << "closed-form R0 = " << num(exact.value) << " (error bound "
            << num(exact.error_bound) << ")\n"
            << "r(T) <= " << num(bound.bound) << " beyond age class " << bound.m << "\n";
  if (!series.empty()) {
    std::cout << "n\tR0_n\tgap\ttail_bound\n";
    for (const auto& [n, value] : series) {
      std::cout << n << "\t" << num(value) << "\t" << num(exact.value - value) << "\t"
                << num(truncation_tail_bound(model, n)) << "\n";
    }
  }
  return 0;
}

int cmd_simulate(const Common& c, Index steps, const std::vector<double>& x0_values,
                 Index burn_in) {
  const auto pm = parse_model_file(c.model_path);
  const auto sys = as_split(pm, c.order);
  Vector<double> x0 = Vector<double>::Ones(sys.dim());
  if (!x0_values.empty()) {
    x0 = Eigen::Map<const Vector<double>>(x0_values.data(), static_cast<Index>(x0_values.size()));
  }
  if (burn_in < 0) burn_in = steps / 5;
  const auto traj = iterate(sys.A(), x0, steps);
  const double g = growth_rate(traj, burn_in);
  const double R0 = r0(sys, pm.tol).radius;
  const double rA = spectral_radius(sys.A(), pm.tol).radius;
  const auto side = [&](double v) { return v > 1 ? 1 : (v < 1 ? -1 : 0); };
  const bool consistent = side(g) == side(rA) && side(R0) == side(rA);
  std::cout << "growth_rate = " << num(g) << (traj.absorbed ? " (absorbed at zero)" : "") << "\n"
            << "r(A) = " << num(rA) << "\n"
            << "R0 = " << num(R0) << "\n"
            << "consistent: " << (consistent ? "yes" : "no")
            << " (sign of growth-1, r(A)-1, R0-1)\n";
  return 0;
}

int cmd_selftest(Index count, std::uint64_t seed, Index n_max) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.n_max = n_max;
  const auto report = cross_validate(count, cfg);
  std::cout << report.to_text();
  return report.all_passed() ? 0 : kExitSelftestFailed;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoConvergence:
    case ErrorCode::RootFindingStalled:
    case ErrorCode::SingularSolve:
    case ErrorCode::TheoremViolation:
    case ErrorCode::AmbiguousBoundary:
      return kExitNumerical;
    default:
      return kExitInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Basic reproduction numbers and stability trichotomy for A = T + F"};
  app.require_subcommand(1);

  Common common;
  bool as_json = false;
  const auto add_model = [&](CLI::App* sub) {
    sub->add_option("model", common.model_path, "JSON model file")->required();
    sub->add_option("--order", common.order,
                    "truncation size when a leslie model is used (default 64)")
        ->check(CLI::PositiveNumber);
  };

  auto* r0_cmd = app.add_subcommand("r0", "R0, r(A) and method diagnostics");
  add_model(r0_cmd);
  r0_cmd->add_flag("--json", as_json, "machine-readable output");

  bool strict = false, no_case_exit = false;
  auto* classify_cmd = app.add_subcommand("classify", "trichotomy verdict (exit 10/11/12)");
  add_model(classify_cmd);
  classify_cmd->add_flag("--strict", strict, "certify strict inequalities");
  classify_cmd->add_flag("--no-case-exit", no_case_exit, "exit 0 regardless of case");
  classify_cmd->add_flag("--json", as_json, "machine-readable output");

  double lambda_min = 0, lambda_max = 0;
  Index samples = 0;
  auto* curve_cmd = app.add_subcommand("curve", "TSV of lambda -> r(F (lambda I - T)^-1)");
  add_model(curve_cmd);
  curve_cmd->add_option("--lambda-min", lambda_min)->required();
  curve_cmd->add_option("--lambda-max", lambda_max)->required();
  curve_cmd->add_option("--samples", samples)->required();

  std::vector<Index> sizes;
  auto* leslie_cmd = app.add_subcommand("leslie", "closed-form R0 and truncation series");
  add_model(leslie_cmd);
  leslie_cmd->add_option("--truncate", sizes, "ascending truncation sizes")->delimiter(',');
  leslie_cmd->add_flag("--json", as_json, "machine-readable output");

  Index steps = 0, burn_in = -1;
  std::vector<double> x0;
  auto* sim_cmd = app.add_subcommand("simulate", "iterate x -> Ax and estimate growth");
  add_model(sim_cmd);
  sim_cmd->add_option("--steps", steps)->required();
  sim_cmd->add_option("--x0", x0, "initial state, comma separated")->delimiter(',');
  sim_cmd->add_option("--burn-in", burn_in, "steps skipped by the regression (default steps/5)");

  Index count = 500, n_max = 8;
  std::uint64_t seed = 1;
  auto* self_cmd = app.add_subcommand("selftest", "randomized invariant battery");
  self_cmd->add_option("--count", count)->check(CLI::PositiveNumber);
  self_cmd->add_option("--seed", seed);
  self_cmd->add_option("--n-max", n_max)->check(CLI::Range(1, 12));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*r0_cmd) return cmd_r0(common, as_json);
    if (*classify_cmd) return cmd_classify(common, strict, no_case_exit, as_json);
    if (*curve_cmd) return cmd_curve(common, lambda_min, lambda_max, samples);
    if (*leslie_cmd) return cmd_leslie(common, sizes, as_json);
    if (*sim_cmd) return cmd_simulate(common, steps, x0, burn_in);
    if (*self_cmd) return cmd_selftest(count, seed, n_max);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
