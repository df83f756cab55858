#pragma once

#include "distopt/scenario.hpp"
#include "distopt/state.hpp"

#include <string>

namespace distopt {

struct RunResult {
  bool ok = false;
  std::string error;  // nonempty when the solver aborted mid-run
  Trajectory trajectory;
  double runtime_seconds = 0.0;
  std::string out_dir;
};

/// Thrown by run_scenario when the scenario fails assumption validation.
class ScenarioRejected : public Error {
 public:
  ScenarioRejected(const std::string& msg, ValidationReport report)
      : Error(msg), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Validates, simulates and exports one scenario. Writes trajectory.csv,
/// metrics.csv and report.txt into out_dir (created if missing). On a solver
/// error the partial outputs are still written and RunResult.ok is false.
/// Refuses to run (throws ScenarioRejected) when validation fails.
RunResult run_scenario(const Scenario& scenario, const std::string& out_dir);

/// Locale-independent float formatting used in all CSV output: shortest of
/// 17 significant digits.
std::string format_double(double v);

void write_trajectory_csv(const std::string& path, const Scenario& scenario,
                          const Trajectory& trajectory);
void write_metrics_csv(const std::string& path, const Trajectory& trajectory);
void write_report(const std::string& path, const Scenario& scenario,
                  const Trajectory& trajectory, const ValidationReport& report,
                  double runtime_seconds, const std::string& error = "");

}  // namespace distopt
