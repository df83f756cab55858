#include "distopt/dt.hpp"

#include "sim_common.hpp"

#include <algorithm>
#include <cmath>

namespace distopt {

namespace {

constexpr double kFeasibilityTol = 1e-9;  // own-set membership slack

void check_gamma(const std::vector<double>& gamma, int n) {
  if (static_cast<int>(gamma.size()) != n)
    throw DimensionError("dt: one gamma per agent required");
  for (double g : gamma) {
    if (!(g > 0.0 && g <= 1.0)) throw Error("dt: gamma must lie in (0, 1]");
  }
}

}  // namespace

DtStepResult dt_step(const std::vector<AgentState>& states,
                     const WeightedDigraph& graph,
                     const std::vector<ConvexSet>& sets,
                     const std::vector<Objective>& objectives,
                     const DtParams& params) {
  const int n = static_cast<int>(states.size());
  if (graph.family() != GraphFamily::Discrete ||
      !graph.is_doubly_stochastic(1e-9))
    throw Error("dt_step: graph must be doubly stochastic with self-weights");
  if (graph.size() != n || static_cast<int>(sets.size()) != n ||
      static_cast<int>(objectives.size()) != n)
    throw DimensionError("dt_step: agent count mismatch");
  if (!(params.T > 0.0)) throw Error("dt_step: sample time must be positive");
  check_gamma(params.gamma, n);
  const int m = static_cast<int>(states.front().x.size());

  DtStepResult out;
  out.next.resize(n);
  out.gr_zero.assign(n, 0);
  Vector v(m), g(m), w(m), p(m);
  for (int i = 0; i < n; ++i) {
    const AgentState& a = states[i];
    if (!(a.q > 0.0)) throw Error("dt_step: corrupted state, q must stay positive");
    v.setZero();
    for (int j = 0; j < n; ++j) {
      const double aij = graph.weight(i, j);
      if (aij != 0.0) v += aij * states[j].x;
    }
    objectives[i].grad_to(v.data(), g.data());
    const double sqrt_q = std::sqrt(a.q);
    if (sqrt_q <= g.squaredNorm()) {
      out.gr_zero[i] = 1;
      w = v;
    } else {
      w = v - (params.T / sqrt_q) * g;
    }
    sets[i].project_to(w.data(), p.data());
    const double gamma = params.gamma[i];
    out.next[i].x = (1.0 - gamma) * w + gamma * p;
    out.next[i].q = a.q + atan_exp(a.x.norm()) * params.T;
  }
  return out;
}

Trajectory simulate_dt(const Scenario& scenario) {
  if (scenario.family != ScenarioFamily::DT)
    throw Error("simulate_dt: scenario family is not discrete");
  const long long steps = scenario.total_steps();
  const double T = scenario.step;
  const int n = scenario.agent_count();
  const int m = scenario.dim;
  check_gamma(scenario.gamma, n);

  Trajectory traj;
  traj.step = T;
  traj.gr_zero_by_agent.assign(n, 0);
  detail::Sampler sampler(scenario, traj);
  detail::CompiledSchedule sched =
      detail::compile_schedule(*scenario.schedule, T, /*include_self=*/true);
  detail::FlatState cur = detail::flatten_initial(scenario);
  detail::FlatState nxt = cur;

  for (int i = 0; i < n; ++i) {
    if (!(cur.q[i] > 0.0)) throw Error("simulate_dt: q0 must be positive");
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

  std::vector<double> v(m), g(m), w(m), p(m);
  std::vector<std::uint8_t> fired(n, 0);
  traj.max_state_norm = std::sqrt(worst_norm_sq());
  for (int i = 0; i < n; ++i) {
    if (scenario.gamma[i] != 1.0) continue;
    const double dist =
        scenario.sets[i].distance_to(&cur.x[static_cast<size_t>(i) * m]);
    traj.max_own_set_dist = std::max(traj.max_own_set_dist, dist);
    if (dist > kFeasibilityTol) ++traj.feasibility_violations;
  }
  sampler.record(0, cur, std::vector<std::uint8_t>(n, 0));
  for (long long k = 0; k < steps; ++k) {
    const detail::EpochAdjacency& adj = sched.epochs[sched.at_step(k)];
    bool any_fired = false;
    for (int i = 0; i < n; ++i) {
      const double* xi = &cur.x[static_cast<size_t>(i) * m];
      std::fill(v.begin(), v.end(), 0.0);
      for (const auto& [j, aij] : adj.in[i]) {
        const double* xj = &cur.x[static_cast<size_t>(j) * m];
        for (int c = 0; c < m; ++c) v[c] += aij * xj[c];
      }
      scenario.objectives[i].grad_to(v.data(), g.data());
      double grad_sq = 0.0, norm_sq = 0.0;
      for (int c = 0; c < m; ++c) {
        grad_sq += g[c] * g[c];
        norm_sq += xi[c] * xi[c];
      }
      const double sqrt_q = std::sqrt(cur.q[i]);
      if (sqrt_q <= grad_sq) {
        fired[i] = 1;
        any_fired = true;
        ++traj.gr_zero_total;
        ++traj.gr_zero_by_agent[i];
        w = v;
      } else {
        fired[i] = 0;
        const double s = T / sqrt_q;
        for (int c = 0; c < m; ++c) w[c] = v[c] - s * g[c];
      }
      scenario.sets[i].project_to(w.data(), p.data());
      const double gamma = scenario.gamma[i];
      double* xo = &nxt.x[static_cast<size_t>(i) * m];
      if (gamma == 1.0) {
        std::copy(p.begin(), p.end(), xo);
        const double dist = scenario.sets[i].distance_to(xo);
        traj.max_own_set_dist = std::max(traj.max_own_set_dist, dist);
        if (dist > kFeasibilityTol) ++traj.feasibility_violations;
      } else {
        for (int c = 0; c < m; ++c) xo[c] = (1.0 - gamma) * w[c] + gamma * p[c];
      }
      nxt.q[i] = cur.q[i] + atan_exp(std::sqrt(norm_sq)) * T;
    }
    if (any_fired) {
      if (traj.gr_zero_first_step < 0) traj.gr_zero_first_step = k;
      traj.gr_zero_last_step = k;
    }
    std::swap(cur.x, nxt.x);
    std::swap(cur.q, nxt.q);
    traj.total_steps = k + 1;

    const double norm_sq = worst_norm_sq();
    traj.max_state_norm = std::max(traj.max_state_norm, std::sqrt(norm_sq));
    if (!std::isfinite(norm_sq)) {
      traj.nonfinite = true;
      throw SimulationError("simulate_dt: nonfinite state at step " +
                                std::to_string(k + 1),
                            std::move(traj));
    }
    if (sampler.wants(k + 1))
      sampler.record(k + 1, cur, std::vector<std::uint8_t>(fired.begin(), fired.end()));
  }
  return traj;
}

}  // namespace distopt
