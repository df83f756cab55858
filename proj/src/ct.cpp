#include "distopt/ct.hpp"

#include "sim_common.hpp"

#include <algorithm>
#include <cmath>

namespace distopt {

std::vector<CtDerivative> ct_rhs(const SwarmState& state,
                                 const WeightedDigraph& graph,
                                 const std::vector<ConvexSet>& sets,
                                 const std::vector<Objective>& objectives) {
  const int n = state.agent_count();
  const int m = state.dim();
  if (graph.family() != GraphFamily::Continuous)
    throw Error("ct_rhs: graph must use the continuous convention");
  if (graph.size() != n || static_cast<int>(sets.size()) != n ||
      static_cast<int>(objectives.size()) != n)
    throw DimensionError("ct_rhs: agent count mismatch");

  std::vector<CtDerivative> out(n);
  Vector proj(m), grad(m);
  for (int i = 0; i < n; ++i) {
    const AgentState& a = state.agents[i];
    if (!(a.q > 0.0)) throw Error("ct_rhs: corrupted state, q must stay positive");
    if (a.x.size() != m || sets[i].dim() != m || objectives[i].dim() != m)
      throw DimensionError("ct_rhs: dimension mismatch");
    Vector acc = Vector::Zero(m);
    for (const auto& [j, w] : graph.in_neighbors(i)) acc += w * (state.agents[j].x - a.x);
    sets[i].project_to(a.x.data(), proj.data());
    acc -= a.x - proj;
    objectives[i].grad_to(a.x.data(), grad.data());
    acc -= grad / std::sqrt(a.q);
    out[i].x_dot = std::move(acc);
    out[i].q_dot = atan_exp(a.x.norm());
  }
  return out;
}

SwarmState euler_step(const SwarmState& state, const GraphSchedule& schedule,
                      const std::vector<ConvexSet>& sets,
                      const std::vector<Objective>& objectives, double h) {
  if (!(h > 0.0)) throw Error("euler_step: h must be positive");
  const double t = state.time;
  const double tol = 1e-9 * std::max(1.0, std::abs(t) + h);
  const double boundary = schedule.next_boundary_after(t + tol);
  if (boundary < t + h - tol)
    throw StepAlignmentError("euler_step: epoch boundary strictly inside the step");

  const std::vector<CtDerivative> d =
      ct_rhs(state, schedule.graph_at(t + tol), sets, objectives);
  SwarmState next = state;
  next.time = t + h;
  for (size_t i = 0; i < next.agents.size(); ++i) {
    next.agents[i].x += h * d[i].x_dot;
    next.agents[i].q += h * d[i].q_dot;
  }
  return next;
}

Trajectory simulate_ct(const Scenario& scenario) {
  if (scenario.family != ScenarioFamily::CT)
    throw Error("simulate_ct: scenario family is not continuous");
  const long long steps = scenario.total_steps();
  const double h = scenario.step;
  const int n = scenario.agent_count();
  const int m = scenario.dim;

  Trajectory traj;
  traj.step = h;
  detail::Sampler sampler(scenario, traj);
  detail::CompiledSchedule sched =
      detail::compile_schedule(*scenario.schedule, h, /*include_self=*/false);
  detail::FlatState cur = detail::flatten_initial(scenario);
  detail::FlatState nxt = cur;

  for (int i = 0; i < n; ++i) {
    if (!(cur.q[i] > 0.0)) throw Error("simulate_ct: q0 must be positive");
  }

  auto worst_norm_sq = [&]() {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      const double* xi = &cur.x[static_cast<size_t>(i) * m];
      for (int c = 0; c < m; ++c) s += xi[c] * xi[c];
      worst = std::max(worst, s);
    }
    return worst;
  };

  std::vector<double> proj(m), grad(m), acc(m);
  traj.max_state_norm = std::sqrt(worst_norm_sq());
  sampler.record(0, cur);
  for (long long k = 0; k < steps; ++k) {
    const detail::EpochAdjacency& adj = sched.epochs[sched.at_step(k)];
    for (int i = 0; i < n; ++i) {
      const double* xi = &cur.x[static_cast<size_t>(i) * m];
      std::fill(acc.begin(), acc.end(), 0.0);
      for (const auto& [j, w] : adj.in[i]) {
        const double* xj = &cur.x[static_cast<size_t>(j) * m];
        for (int c = 0; c < m; ++c) acc[c] += w * (xj[c] - xi[c]);
      }
      scenario.sets[i].project_to(xi, proj.data());
      scenario.objectives[i].grad_to(xi, grad.data());
      const double inv_sq = 1.0 / std::sqrt(cur.q[i]);
      double norm_sq = 0.0;
      double* xo = &nxt.x[static_cast<size_t>(i) * m];
      for (int c = 0; c < m; ++c) {
        acc[c] -= (xi[c] - proj[c]) + grad[c] * inv_sq;
        xo[c] = xi[c] + h * acc[c];
        norm_sq += xi[c] * xi[c];
      }
      nxt.q[i] = cur.q[i] + h * atan_exp(std::sqrt(norm_sq));
    }
    std::swap(cur.x, nxt.x);
    std::swap(cur.q, nxt.q);
    traj.total_steps = k + 1;

    const double norm_sq = worst_norm_sq();
    traj.max_state_norm = std::max(traj.max_state_norm, std::sqrt(norm_sq));
    if (!std::isfinite(norm_sq)) {
      traj.nonfinite = true;
      throw SimulationError("simulate_ct: nonfinite state at step " +
                                std::to_string(k + 1),
                            std::move(traj));
    }
    if (sampler.wants(k + 1)) sampler.record(k + 1, cur);
  }
  return traj;
}

}  // namespace distopt
