#pragma once

// Internal plumbing shared by the two solvers: flattened state buffers,
// per-epoch adjacency lists and the step-aligned epoch lookup table.

#include "distopt/graph.hpp"
#include "distopt/metrics.hpp"
#include "distopt/scenario.hpp"
#include "distopt/state.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace distopt::detail {

struct EpochAdjacency {
  // per agent: (neighbor index, weight); self entry included for the discrete
  // family, excluded for the continuous one.
  std::vector<std::vector<std::pair<int, double>>> in;
};

struct CompiledSchedule {
  std::vector<EpochAdjacency> epochs;
  std::vector<int> step_epoch;  // epoch index by step number within one period
  long long steps_per_period = 0;

  int at_step(long long k) const {
    return step_epoch[static_cast<size_t>(k % steps_per_period)];
  }
};

// Requires every epoch boundary and the period to be integer multiples of the
// step; throws StepAlignmentError otherwise.
inline CompiledSchedule compile_schedule(const GraphSchedule& schedule,
                                         double step, bool include_self) {
  auto as_steps = [&](double t, const char* what) {
    const double k = t / step;
    const long long r = std::llround(k);
    if (std::abs(k - r) > 1e-9 * std::max(1.0, std::abs(k)))
      throw StepAlignmentError(std::string("schedule ") + what +
                               " is not an integer multiple of the step");
    return r;
  };
  CompiledSchedule out;
  out.steps_per_period = as_steps(schedule.period(), "period");
  if (out.steps_per_period < 1)
    throw StepAlignmentError("schedule period shorter than one step");
  for (const Epoch& e : schedule.epochs()) {
    (void)as_steps(e.start, "epoch start");
    EpochAdjacency adj;
    const int n = e.graph.size();
    adj.in.resize(n);
    for (int i = 0; i < n; ++i) {
      adj.in[i] = e.graph.in_neighbors(i);
      if (include_self) adj.in[i].emplace_back(i, e.graph.weight(i, i));
    }
    out.epochs.push_back(std::move(adj));
  }
  out.step_epoch.resize(static_cast<size_t>(out.steps_per_period));
  for (long long k = 0; k < out.steps_per_period; ++k)
    out.step_epoch[static_cast<size_t>(k)] =
        schedule.epoch_index_at((static_cast<double>(k) + 0.5) * step);
  return out;
}

struct FlatState {
  int n = 0, m = 0;
  std::vector<double> x;  // n*m, agent-major
  std::vector<double> q;  // n

  SwarmState assemble(double time) const {
    SwarmState s;
    s.time = time;
    s.agents.resize(n);
    for (int i = 0; i < n; ++i) {
      s.agents[i].x = Eigen::Map<const Vector>(&x[static_cast<size_t>(i) * m], m);
      s.agents[i].q = q[i];
    }
    return s;
  }
};

inline FlatState flatten_initial(const Scenario& scenario) {
  FlatState fs;
  fs.n = scenario.agent_count();
  fs.m = scenario.dim;
  fs.x.resize(static_cast<size_t>(fs.n) * fs.m);
  fs.q.assign(fs.n, scenario.q0);
  const std::vector<Vector> init = scenario.initial_states();
  for (int i = 0; i < fs.n; ++i)
    for (int c = 0; c < fs.m; ++c) fs.x[static_cast<size_t>(i) * fs.m + c] = init[i][c];
  return fs;
}

// Records samples at step 0, every stride-th step and the final step.
class Sampler {
 public:
  Sampler(const Scenario& scenario, Trajectory& out)
      : evaluator_(scenario.sets, scenario.objectives, scenario.reference),
        out_(out),
        stride_(scenario.stride),
        total_(scenario.total_steps()),
        step_(scenario.step) {}

  bool wants(long long k) const {
    return k == 0 || k == total_ || k % stride_ == 0;
  }

  void record(long long k, const FlatState& fs,
              std::vector<std::uint8_t> gr_zero = {}) {
    TrajectorySample sample;
    sample.state = fs.assemble(static_cast<double>(k) * step_);
    sample.metrics = evaluator_(sample.state);
    sample.gr_zero = std::move(gr_zero);
    out_.samples.push_back(std::move(sample));
  }

 private:
  MetricsEvaluator evaluator_;
  Trajectory& out_;
  long long stride_;
  long long total_;
  double step_;
};

}  // namespace distopt::detail
