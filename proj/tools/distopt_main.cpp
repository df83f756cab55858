// Command line front end: validate, run and analyze scenario files, plus the
// built-in 24-agent experiment.

#include "distopt/ct.hpp"
#include "distopt/dt.hpp"
#include "distopt/metrics.hpp"
#include "distopt/run.hpp"
#include "distopt/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

int log_level() {
  const char* env = std::getenv("DISTOPT_LOG");
  if (!env) return 1;
  const std::string v(env);
  if (v == "quiet") return 0;
  if (v == "debug") return 2;
  return 1;
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << msg << "\n";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw distopt::Error("cannot open scenario file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

distopt::Scenario load(const std::string& path) {
  return distopt::parse_scenario(slurp(path));
}

void apply_overrides(distopt::Scenario& s, const std::optional<std::uint64_t>& seed,
                     const std::optional<long long>& stride,
                     const std::optional<double>& horizon) {
  if (seed) s.seed = *seed;
  if (stride) s.stride = *stride;
  if (horizon) s.horizon = *horizon;
}

int do_run(const distopt::Scenario& scenario, const std::string& out_dir) {
  try {
    const distopt::RunResult result = distopt::run_scenario(scenario, out_dir);
    if (!result.ok) {
      std::cerr << "solver error: " << result.error << " (partial outputs in "
                << out_dir << ")\n";
      return 3;
    }
    const distopt::MetricSample& ms = result.trajectory.terminal().metrics;
    info("wrote " + out_dir + " (steps " + std::to_string(result.trajectory.total_steps) +
         ", runtime " + distopt::format_double(result.runtime_seconds) + " s)");
    std::cout << "terminal consensus_err " << distopt::format_double(ms.consensus_err)
              << ", feas_err " << distopt::format_double(ms.feas_err);
    if (ms.opt_dist) std::cout << ", opt_dist " << distopt::format_double(*ms.opt_dist);
    std::cout << "\n";
    return 0;
  } catch (const distopt::ScenarioRejected& e) {
    std::cerr << "refusing to run: validation failed\n";
    for (const auto& issue : e.report().issues)
      std::cerr << "  " << issue.formatted() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed constrained consensus optimization simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, variant = "ct";
  std::optional<std::uint64_t> seed;
  std::optional<long long> stride;
  std::optional<double> horizon;
  double init_scale = 1.0;
  long long oracle_iters = 20000;
  double oracle_step_scale = 0.1;

  CLI::App* run = app.add_subcommand("run", "simulate a scenario file");
  run->add_option("scenario", scenario_path, "scenario JSON file")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--stride", stride, "override the sample stride");

  CLI::App* builtin = app.add_subcommand("builtin", "run a built-in experiment");
  std::string which = "sec5";
  builtin->add_option("experiment", which, "experiment name (sec5)")->required();
  builtin->add_option("--variant", variant, "ct | dt-mixed | dt-projected")
      ->check(CLI::IsMember({"ct", "dt-mixed", "dt-projected"}));
  builtin->add_option("--out", out_dir, "output directory")->required();
  builtin->add_option("--seed", seed, "override the built-in seed");
  builtin->add_option("--stride", stride, "override the sample stride");
  builtin->add_option("--horizon", horizon, "override the frozen horizon (seconds)");
  builtin->add_option("--init-scale", init_scale, "scale of the initial-state box");

  CLI::App* validate = app.add_subcommand("validate", "check a scenario against the assumptions");
  validate->add_option("scenario", scenario_path, "scenario JSON file")->required();

  CLI::App* oracle = app.add_subcommand(
      "oracle", "centralized projected-gradient reference optimum for a scenario");
  oracle->add_option("scenario", scenario_path, "scenario JSON file")->required();
  oracle->add_option("--iters", oracle_iters, "iteration budget");
  oracle->add_option("--step-scale", oracle_step_scale, "step rule scale a in a/sqrt(k+1)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      distopt::Scenario s = load(scenario_path);
      apply_overrides(s, seed, stride, std::nullopt);
      return do_run(s, out_dir);
    }
    if (*builtin) {
      if (which != "sec5") {
        std::cerr << "unknown builtin experiment: " << which << "\n";
        return 2;
      }
      distopt::Sec5Variant v = distopt::Sec5Variant::CT;
      if (variant == "dt-mixed") v = distopt::Sec5Variant::DtMixed;
      if (variant == "dt-projected") v = distopt::Sec5Variant::DtProjected;
      distopt::Scenario s =
          seed ? distopt::builtin_sec5(v, init_scale, *seed)
               : distopt::builtin_sec5(v, init_scale);
      apply_overrides(s, std::nullopt, stride, horizon);
      std::filesystem::create_directories(out_dir);
      std::ofstream((std::filesystem::path(out_dir) / "scenario.json").string())
          << distopt::serialize_scenario(s);
      return do_run(s, out_dir);
    }
    if (*validate) {
      const distopt::Scenario s = load(scenario_path);
      const distopt::ValidationReport report = distopt::validate_scenario(s);
      std::cout << "validation: " << report.summary() << "\n";
      for (const auto& w : report.windows) {
        if (log_level() >= 2)
          std::cout << "  window [" << w.start << ", " << w.end << "): "
                    << (w.strongly_connected ? "strongly connected" : "NOT strongly connected")
                    << "\n";
      }
      return report.pass() ? 0 : 1;
    }
    if (*oracle) {
      const distopt::Scenario s = load(scenario_path);
      const distopt::Vector x = distopt::centralized_oracle(
          s.objectives, s.sets, s.feasible_point,
          distopt::sqrt_decay_rule(oracle_step_scale), oracle_iters);
      std::cout << "reference optimum:";
      for (int c = 0; c < x.size(); ++c) std::cout << ' ' << distopt::format_double(x[c]);
      std::cout << "\n";
      double team = 0.0;
      for (const auto& f : s.objectives) team += f.eval(x);
      std::cout << "team value: " << distopt::format_double(team) << "\n";
      std::cout << "kkt: "
                << (distopt::verify_kkt(s.objectives, s.sets, x, 1e-5) ? "pass" : "FAIL")
                << "\n";
      return 0;
    }
  } catch (const distopt::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const distopt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
