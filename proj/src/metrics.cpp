#include "distopt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace distopt {

Vector SwarmState::mean() const {
  Vector m = Vector::Zero(dim());
  for (const AgentState& a : agents) m += a.x;
  return m / static_cast<double>(agents.size());
}

namespace {

// Intersection of the distinct sets (several agents usually share one set).
ConvexSet build_hull(const std::vector<ConvexSet>& sets) {
  std::vector<ConvexSet> distinct;
  for (const ConvexSet& s : sets) {
    bool seen = false;
    for (const ConvexSet& d : distinct) {
      if (d.same_impl(s)) {
        seen = true;
        break;
      }
    }
    if (!seen) distinct.push_back(s);
  }
  if (distinct.size() == 1) return distinct.front();
  return ConvexSet::intersection(std::move(distinct));
}

}  // namespace

MetricsEvaluator::MetricsEvaluator(std::vector<ConvexSet> sets,
                                   std::vector<Objective> objectives,
                                   std::optional<Vector> reference)
    : sets_(std::move(sets)),
      objectives_(std::move(objectives)),
      reference_(std::move(reference)),
      hull_(build_hull(sets_)) {
  if (sets_.size() != objectives_.size() || sets_.empty())
    throw Error("metrics: one set and one objective per agent required");
}

MetricSample MetricsEvaluator::operator()(const SwarmState& state) const {
  const size_t n = sets_.size();
  if (state.agents.size() != n)
    throw DimensionError("metrics: agent count mismatch");
  MetricSample out;
  out.time = state.time;
  const Vector xbar = state.mean();

  double spread_sq = 0.0;
  for (const AgentState& a : state.agents) {
    const double d = (a.x - xbar).norm();
    out.consensus_err = std::max(out.consensus_err, d);
    spread_sq += d * d;
  }

  out.per_set_dists.reserve(n);
  for (const ConvexSet& s : sets_) out.per_set_dists.push_back(s.distance(xbar));
  out.feas_err = hull_.distance(xbar);

  out.team_value = 0.0;
  for (const Objective& f : objectives_) out.team_value += f.eval(xbar);

  out.V1 = spread_sq + static_cast<double>(n) * out.feas_err * out.feas_err;
  if (reference_) {
    const double od = (xbar - *reference_).norm();
    out.opt_dist = od;
    out.V2 = spread_sq + static_cast<double>(n) * od * od;
  }
  return out;
}

MetricSample measure(const SwarmState& state, const std::vector<ConvexSet>& sets,
                     const std::vector<Objective>& objectives,
                     const std::optional<Vector>& reference) {
  return MetricsEvaluator(sets, objectives, reference)(state);
}

StepRule sqrt_decay_rule(double scale) {
  return [scale](long long k) { return scale / std::sqrt(static_cast<double>(k + 1)); };
}

Vector centralized_oracle(const std::vector<Objective>& objectives,
                          const std::vector<ConvexSet>& sets, const Vector& x0,
                          const StepRule& step_rule, long long iters) {
  if (objectives.empty() || sets.empty()) throw Error("oracle: empty problem");
  const ConvexSet hull = build_hull(sets);
  const int m = static_cast<int>(x0.size());
  if (hull.dim() != m) throw DimensionError("oracle: dimension mismatch");

  auto team_value = [&](const Vector& x) {
    double s = 0.0;
    for (const Objective& f : objectives) s += f.eval(x);
    return s;
  };

  Vector x = hull.project(x0);
  Vector g(m);
  const long long window = std::max<long long>(500, iters / 20);
  double prev_window_best = std::numeric_limits<double>::infinity();
  double window_best = std::numeric_limits<double>::infinity();
  int rising_windows = 0;
  for (long long k = 0; k < iters; ++k) {
    g.setZero();
    Vector tmp(m);
    for (const Objective& f : objectives) {
      f.grad_to(x.data(), tmp.data());
      g += tmp;
    }
    x = hull.project(x - step_rule(k) * g);
    if (!x.allFinite()) throw Error("oracle: nonfinite iterate");
    window_best = std::min(window_best, team_value(x));
    if ((k + 1) % window == 0) {
      if (window_best > prev_window_best + 1e-12) {
        if (++rising_windows >= 3)
          throw Error("oracle: objective increased over consecutive windows");
      } else {
        rising_windows = 0;
      }
      prev_window_best = window_best;
      window_best = std::numeric_limits<double>::infinity();
    }
  }
  return x;
}

bool verify_kkt(const std::vector<Objective>& objectives,
                const std::vector<ConvexSet>& sets, const Vector& s, double tol) {
  const ConvexSet hull = build_hull(sets);
  if (hull.distance(s) > tol) return false;
  Vector g = Vector::Zero(s.size());
  Vector tmp(s.size());
  for (const Objective& f : objectives) {
    f.grad_to(s.data(), tmp.data());
    g += tmp;
  }
  constexpr double alpha = 1e-2;
  const double residual = (s - hull.project(s - alpha * g)).norm();
  return residual <= alpha * tol;
}

}  // namespace distopt
