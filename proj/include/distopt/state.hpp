#pragma once

#include "distopt/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace distopt {

struct AgentState {
  Vector x;
  double q = 1.0;  // stepsize accumulator, strictly positive and increasing
};

struct SwarmState {
  double time = 0.0;  // seconds (continuous) or k*T (discrete)
  std::vector<AgentState> agents;

  int dim() const { return agents.empty() ? 0 : static_cast<int>(agents.front().x.size()); }
  int agent_count() const { return static_cast<int>(agents.size()); }
  /// x*(t), the arithmetic mean of the agent states.
  Vector mean() const;
};

/// Swarm-level convergence measures at one sample.
struct MetricSample {
  double time = 0.0;
  double consensus_err = 0.0;          // max_i ||x_i - x*||
  double feas_err = 0.0;               // ||x* - P_H(x*)||
  std::vector<double> per_set_dists;   // ||x* - P_{H_i}(x*)|| per agent
  double team_value = 0.0;             // sum_i f_i(x*)
  double V1 = 0.0;                     // sum_i ||x_i - x*||^2 + n ||x* - P_H(x*)||^2
  std::optional<double> opt_dist;      // ||x* - reference|| when a reference exists
  std::optional<double> V2;            // sum_i ||x_i - x*||^2 + n opt_dist^2
};

struct TrajectorySample {
  SwarmState state;
  MetricSample metrics;
  std::vector<std::uint8_t> gr_zero;  // discrete family: per-agent branch flag
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  long long total_steps = 0;
  double step = 0.0;

  // Tracked at every step, not just at samples.
  double max_state_norm = 0.0;
  bool nonfinite = false;

  // Discrete-family switching statistics.
  long long gr_zero_total = 0;
  long long gr_zero_first_step = -1;
  long long gr_zero_last_step = -1;
  std::vector<long long> gr_zero_by_agent;

  // Own-set feasibility, counted per step for agents with gamma_i = 1.
  long long feasibility_violations = 0;
  double max_own_set_dist = 0.0;

  const TrajectorySample& terminal() const { return samples.back(); }
};

/// A step failure; carries whatever was simulated before the failure.
class SimulationError : public Error {
 public:
  SimulationError(const std::string& msg, Trajectory partial)
      : Error(msg), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

class StepAlignmentError : public Error {
 public:
  using Error::Error;
};

}  // namespace distopt
