#include "distopt/run.hpp"

#include "distopt/ct.hpp"
#include "distopt/dt.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>

namespace distopt {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

void write_trajectory_csv(const std::string& path, const Scenario& scenario,
                          const Trajectory& trajectory) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  const bool dt = scenario.family == ScenarioFamily::DT;
  const int m = scenario.dim;
  out << "t,agent";
  for (int c = 1; c <= m; ++c) out << ",x_" << c;
  out << ",q,dist_Hi,consensus_err,V1";
  if (dt) out << ",gr_zero_branch,gamma";
  out << "\n";
  for (const TrajectorySample& s : trajectory.samples) {
    for (int i = 0; i < s.state.agent_count(); ++i) {
      const AgentState& a = s.state.agents[i];
      out << format_double(s.state.time) << ',' << i;
      for (int c = 0; c < m; ++c) out << ',' << format_double(a.x[c]);
      out << ',' << format_double(a.q) << ','
          << format_double(scenario.sets[i].distance(a.x)) << ','
          << format_double(s.metrics.consensus_err) << ','
          << format_double(s.metrics.V1);
      if (dt)
        out << ',' << (s.gr_zero.empty() ? 0 : int(s.gr_zero[i])) << ','
            << format_double(scenario.gamma[i]);
      out << "\n";
    }
  }
}

void write_metrics_csv(const std::string& path, const Trajectory& trajectory) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << "t,consensus_err,feas_err,team_value,V1,opt_dist\n";
  for (const TrajectorySample& s : trajectory.samples) {
    const MetricSample& ms = s.metrics;
    out << format_double(ms.time) << ',' << format_double(ms.consensus_err) << ','
        << format_double(ms.feas_err) << ',' << format_double(ms.team_value) << ','
        << format_double(ms.V1) << ',';
    if (ms.opt_dist) out << format_double(*ms.opt_dist);
    out << "\n";
  }
}

void write_report(const std::string& path, const Scenario& scenario,
                  const Trajectory& trajectory, const ValidationReport& report,
                  double runtime_seconds, const std::string& error) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  const bool dt = scenario.family == ScenarioFamily::DT;
  out << "scenario: " << scenario.name << "\n";
  out << "family: " << (dt ? "dt" : "ct") << "\n";
  out << "agents: " << scenario.agent_count() << "\n";
  out << "dim: " << scenario.dim << "\n";
  out << "step: " << format_double(scenario.step) << "\n";
  out << "steps: " << trajectory.total_steps << "\n";
  out << "assumption_validation: " << (report.pass() ? "pass" : "FAIL") << "\n";
  for (const ValidationIssue& issue : report.issues)
    out << "assumption_issue: " << issue.formatted() << "\n";
  if (!error.empty()) out << "error: " << error << "\n";
  if (!trajectory.samples.empty()) {
    const MetricSample& ms = trajectory.terminal().metrics;
    out << "terminal_time: " << format_double(ms.time) << "\n";
    out << "terminal_consensus_err: " << format_double(ms.consensus_err) << "\n";
    out << "terminal_feas_err: " << format_double(ms.feas_err) << "\n";
    out << "terminal_team_value: " << format_double(ms.team_value) << "\n";
    out << "terminal_V1: " << format_double(ms.V1) << "\n";
    if (ms.opt_dist)
      out << "terminal_opt_dist: " << format_double(*ms.opt_dist) << "\n";
    if (ms.V2) out << "terminal_V2: " << format_double(*ms.V2) << "\n";
    if (scenario.reference) {
      double worst = 0.0;
      for (const AgentState& a : trajectory.terminal().state.agents)
        worst = std::max(worst, (a.x - *scenario.reference).norm());
      out << "terminal_max_agent_opt_dist: " << format_double(worst) << "\n";
    }
  }
  out << "max_state_norm: " << format_double(trajectory.max_state_norm) << "\n";
  out << "nonfinite_detected: " << (trajectory.nonfinite ? "true" : "false") << "\n";
  if (dt) {
    out << "gr_zero_total: " << trajectory.gr_zero_total << "\n";
    out << "gr_zero_first_step: " << trajectory.gr_zero_first_step << "\n";
    out << "gr_zero_last_step: " << trajectory.gr_zero_last_step << "\n";
    out << "feasibility_violations: " << trajectory.feasibility_violations << "\n";
    out << "max_own_set_dist: " << format_double(trajectory.max_own_set_dist) << "\n";
  }
  out << "runtime_seconds: " << format_double(runtime_seconds) << "\n";
}

RunResult run_scenario(const Scenario& scenario, const std::string& out_dir) {
  ValidationReport report = validate_scenario(scenario);
  if (!report.pass()) {
    const std::string msg = "scenario rejected: " + report.issues.front().formatted();
    throw ScenarioRejected(msg, std::move(report));
  }

  std::filesystem::create_directories(out_dir);
  const auto traj_path = (std::filesystem::path(out_dir) / "trajectory.csv").string();
  const auto metrics_path = (std::filesystem::path(out_dir) / "metrics.csv").string();
  const auto report_path = (std::filesystem::path(out_dir) / "report.txt").string();

  RunResult result;
  result.out_dir = out_dir;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    result.trajectory = scenario.family == ScenarioFamily::CT ? simulate_ct(scenario)
                                                              : simulate_dt(scenario);
    result.ok = true;
  } catch (const SimulationError& e) {
    result.trajectory = e.partial();
    result.error = e.what();
    result.ok = false;
  }
  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_trajectory_csv(traj_path, scenario, result.trajectory);
  write_metrics_csv(metrics_path, result.trajectory);
  write_report(report_path, scenario, result.trajectory, report,
               result.runtime_seconds, result.error);
  return result;
}

}  // namespace distopt
