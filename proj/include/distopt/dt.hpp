#pragma once

#include "distopt/convex.hpp"
#include "distopt/graph.hpp"
#include "distopt/objective.hpp"
#include "distopt/scenario.hpp"
#include "distopt/state.hpp"

#include <cstdint>
#include <vector>

namespace distopt {

struct DtParams {
  double T = 0.1;             // sample time
  std::vector<double> gamma;  // one entry per agent, each in (0, 1]
};

struct DtStepResult {
  std::vector<AgentState> next;
  std::vector<std::uint8_t> gr_zero;  // 1 where the switching rule zeroed the gradient
};

/// One step of the discrete-time algorithm, following the four-stage recipe:
///   (a) v_i = sum_{j in N_i u {i}} a_ij x_j,  q_i+ = q_i + atan(e^||x_i||) T
///   (b) gr_i = 0 if sqrt(q_i) <= ||grad f_i(v_i)||^2, else grad f_i(v_i)/sqrt(q_i)
///   (c) w_i = v_i - gr_i T
///   (d) x_i+ = (1 - gamma_i) w_i + gamma_i P_{H_i}(w_i)
/// The switching test uses the pre-update q_i. Requires a doubly stochastic
/// discrete-family graph.
DtStepResult dt_step(const std::vector<AgentState>& states,
                     const WeightedDigraph& graph,
                     const std::vector<ConvexSet>& sets,
                     const std::vector<Objective>& objectives,
                     const DtParams& params);

/// Runs the scenario for horizon/step steps, sampling like simulate_ct and
/// recording switching and feasibility statistics at every step.
Trajectory simulate_dt(const Scenario& scenario);

}  // namespace distopt
