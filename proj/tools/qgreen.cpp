// Command line front end: validate / solve / sweep / selftest.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "qgreen/artifacts.hpp"
#include "qgreen/selftest.hpp"

namespace fs = std::filesystem;
using namespace qgreen;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;

struct SolveFlags {
  std::string config_path;
  std::optional<double> lambda;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
};

RunConfig load_with_overrides(const SolveFlags& flags) {
  RunConfig cfg = load_config(flags.config_path);
  if (flags.lambda) cfg.lambda = *flags.lambda;
  if (flags.tol) cfg.numerics.tol = *flags.tol;
  if (flags.max_iter) cfg.numerics.max_iter = *flags.max_iter;
  if (flags.out_dir) cfg.output.dir = *flags.out_dir;
  if (flags.format) {
    if (*flags.format != "csv" && *flags.format != "json")
      throw ConfigError("output.format", "must be 'csv' or 'json'");
    cfg.output.format = *flags.format;
  }
  return cfg;
}

void write_validation_reports(const fs::path& dir, const HypothesisReport& hyp,
                              const FHypothesisReport& frep) {
  nlohmann::json j{{"hypothesis", to_json(hyp)},
                   {"f_hypotheses", to_json(frep)},
                   {"pass", hyp.pass() && frep.pass()}};
  write_text_file((dir / "hypothesis.json").string(), j.dump(2) + "\n");
}

int cmd_validate(const SolveFlags& flags) {
  const RunConfig cfg = load_with_overrides(flags);
  const ProblemSpec spec = cfg.to_problem_spec();
  const GreenEvaluator green(spec);
  const HypothesisReport hyp = green.validate(cfg.numerics.phi_samples);
  const FHypothesisReport frep = check_f_hypotheses(spec, cfg.numerics.hyp_samples, 10.0);

  const fs::path dir(cfg.output.dir);
  fs::create_directories(dir);
  write_validation_reports(dir, hyp, frep);
  write_text_file((dir / "config_resolved.json").string(), cfg.to_json().dump(2) + "\n");

  std::printf("hypothesis (H1): rho = %s (%s), B = %s (%s), min phi = %s (%s)\n",
              fmt_double(hyp.constants.rho).c_str(), hyp.rho_positive ? "ok" : "FAIL",
              fmt_double(hyp.constants.B).c_str(), hyp.B_nonneg ? "ok" : "FAIL",
              fmt_double(hyp.phi_min_sampled).c_str(), hyp.phi_nonneg ? "ok" : "FAIL");
  std::printf("hypotheses (H2)-(H4) on f, h, y: %s\n", frep.pass() ? "ok" : "FAIL");
  return (hyp.pass() && frep.pass()) ? kExitOk : kExitNumerical;
}

int cmd_solve(const SolveFlags& flags) {
  const RunConfig cfg = load_with_overrides(flags);
  const ProblemSpec spec = cfg.to_problem_spec();
  const GreenEvaluator green(spec);

  const fs::path dir(cfg.output.dir);
  fs::create_directories(dir);
  write_text_file((dir / "config_resolved.json").string(), cfg.to_json().dump(2) + "\n");

  const HypothesisReport hyp = green.validate(cfg.numerics.phi_samples);
  const FHypothesisReport frep = check_f_hypotheses(spec, cfg.numerics.hyp_samples, 10.0);
  write_validation_reports(dir, hyp, frep);
  if (!hyp.pass() || !frep.pass()) {
    std::fprintf(stderr, "hypothesis checks failed; see %s\n",
                 (dir / "hypothesis.json").string().c_str());
    return kExitNumerical;
  }

  const SolveReport rep = solve(green, cfg.solve_options());
  const std::string ext = cfg.output.format == "json" ? ".json" : ".csv";
  write_text_file((dir / ("solution" + ext)).string(),
                  solution_table(rep.solution, green, cfg.output.eval_points, cfg.output.format));
  write_text_file((dir / ("trace" + ext)).string(), iteration_trace(rep, cfg.output.format));
  if (rep.residuals)
    write_text_file((dir / "residuals.json").string(), to_json(*rep.residuals).dump(2) + "\n");
  write_text_file((dir / "report.json").string(), solve_report_json(rep).dump(2) + "\n");

  std::printf("%s in %d iterations; sup|x| = %s, fixed-point residual = %s\n",
              rep.converged ? "converged" : "NOT converged", rep.n_iters,
              fmt_double(rep.sup_norm).c_str(), fmt_double(rep.fixed_point_residual).c_str());
  return rep.converged ? kExitOk : kExitNumerical;
}

int cmd_sweep(const SolveFlags& flags, const std::string& lambdas_csv) {
  const RunConfig cfg = load_with_overrides(flags);
  std::vector<double> lambdas;
  std::size_t pos = 0;
  while (pos < lambdas_csv.size()) {
    std::size_t next = lambdas_csv.find(',', pos);
    if (next == std::string::npos) next = lambdas_csv.size();
    try {
      lambdas.push_back(std::stod(lambdas_csv.substr(pos, next - pos)));
    } catch (const std::exception&) {
      throw ConfigError("lambdas", "malformed number in --lambdas");
    }
    pos = next + 1;
  }
  const ProblemSpec spec = cfg.to_problem_spec();
  const GreenEvaluator green(spec);
  const SweepReport sweep = lambda_sweep(green, lambdas, cfg.solve_options());

  const fs::path dir(cfg.output.dir);
  fs::create_directories(dir);
  std::string csv = "lambda,sup_norm,converged,n_iters\n";
  for (std::size_t i = 0; i < sweep.lambdas.size(); ++i)
    csv += fmt_double(sweep.lambdas[i]) + "," + fmt_double(sweep.reports[i].sup_norm) + "," +
           (sweep.reports[i].converged ? "1" : "0") + "," +
           std::to_string(sweep.reports[i].n_iters) + "\n";
  write_text_file((dir / "sweep.csv").string(), csv);
  write_text_file((dir / "sweep.json").string(), sweep_report_json(sweep).dump(2) + "\n");

  for (const auto& v : sweep.violations) std::fprintf(stderr, "monotonicity: %s\n", v.c_str());
  std::printf("swept %zu lambda values; pointwise ordering %s, norms %s\n", sweep.lambdas.size(),
              sweep.pointwise_ordered ? "ok" : "VIOLATED",
              sweep.norms_increasing ? "increasing" : "NOT increasing");
  const bool ok = sweep.pointwise_ordered && sweep.norms_increasing;
  return ok ? kExitOk : kExitNumerical;
}

int cmd_selftest(double trunc_tol) {
  const auto results = qgreen::selftest::run_all(trunc_tol);
  bool all_ok = true;
  std::printf("%-28s %6s %10s %10s  %s\n", "suite", "cases", "worst", "tol", "status");
  for (const auto& r : results) {
    all_ok = all_ok && r.pass;
    std::printf("%-28s %6ld %10.2e %10.2e  %s%s%s\n", r.name.c_str(), r.cases, r.worst, r.tol,
                r.pass ? "pass" : "FAIL", r.note.empty() ? "" : "  # ", r.note.c_str());
  }
  return all_ok ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qgreen: positive solutions of Caputo-type fractional q-difference "
               "boundary value problems with m-point and Stieltjes integral conditions"};
  app.require_subcommand(1);

  SolveFlags flags;
  std::string lambdas_csv;
  double selftest_tol = 1e-14;

  auto add_common = [&](CLI::App* sub, bool need_config) {
    auto* opt = sub->add_option("--config", flags.config_path, "path to the JSON config");
    if (need_config) opt->required();
    sub->add_option("--tol", [&](const CLI::results_t& r) {
      flags.tol = std::stod(r[0]);
      return true;
    }, "override numerics.tol");
    sub->add_option("--max-iter", [&](const CLI::results_t& r) {
      flags.max_iter = std::stoi(r[0]);
      return true;
    }, "override numerics.max_iter");
    sub->add_option("--out", [&](const CLI::results_t& r) {
      flags.out_dir = r[0];
      return true;
    }, "override output.dir");
    sub->add_option("--format", [&](const CLI::results_t& r) {
      flags.format = r[0];
      return true;
    }, "override output.format (csv|json)");
  };

  CLI::App* validate = app.add_subcommand("validate", "check hypotheses (H1)-(H4)");
  add_common(validate, true);

  CLI::App* solve_cmd = app.add_subcommand("solve", "run the fixed-point iteration");
  add_common(solve_cmd, true);
  solve_cmd->add_option("--lambda", [&](const CLI::results_t& r) {
    flags.lambda = std::stod(r[0]);
    return true;
  }, "override problem.lambda");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "solve across a list of lambda values");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--lambdas", lambdas_csv, "comma separated, strictly increasing")
      ->required();

  CLI::App* selftest_cmd = app.add_subcommand("selftest", "run the built-in property suites");
  selftest_cmd->add_option("--trunc-tol", selftest_tol, "truncation tolerance for the suites");

  try {
    app.parse(argc, argv);
    if (validate->parsed()) return cmd_validate(flags);
    if (solve_cmd->parsed()) return cmd_solve(flags);
    if (sweep_cmd->parsed()) return cmd_sweep(flags, lambdas_csv);
    if (selftest_cmd->parsed()) return cmd_selftest(selftest_tol);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitConfig : kExitOk;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "expression error: %s\n", e.what());
    return kExitConfig;
  } catch (const UnknownIdentifier& e) {
    std::fprintf(stderr, "expression error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitConfig;
}
