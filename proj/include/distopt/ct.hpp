#pragma once

#include "distopt/convex.hpp"
#include "distopt/graph.hpp"
#include "distopt/objective.hpp"
#include "distopt/scenario.hpp"
#include "distopt/state.hpp"

#include <vector>

namespace distopt {

struct CtDerivative {
  Vector x_dot;
  double q_dot;
};

/// Right-hand side of the continuous-time dynamics for every agent:
///   x_dot_i = sum_{j in N_i} a_ij (x_j - x_i) - (x_i - P_{H_i}(x_i))
///             - grad f_i(x_i) / sqrt(q_i)
///   q_dot_i = atan(e^||x_i||)
/// Requires a continuous-family graph and q_i > 0.
std::vector<CtDerivative> ct_rhs(const SwarmState& state,
                                 const WeightedDigraph& graph,
                                 const std::vector<ConvexSet>& sets,
                                 const std::vector<Objective>& objectives);

/// One forward Euler step of length h using the epoch graph at state.time.
/// Throws StepAlignmentError if an epoch boundary falls strictly inside
/// (t, t + h).
SwarmState euler_step(const SwarmState& state, const GraphSchedule& schedule,
                      const std::vector<ConvexSet>& sets,
                      const std::vector<Objective>& objectives, double h);

/// Integrates the scenario over its horizon with fixed-step forward Euler,
/// sampling states and metrics every `stride` steps (plus the initial and
/// final step). The scenario must have passed validate_scenario.
Trajectory simulate_ct(const Scenario& scenario);

}  // namespace distopt
