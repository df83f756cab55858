#pragma once

#include "distopt/convex.hpp"
#include "distopt/objective.hpp"
#include "distopt/state.hpp"
#include "distopt/types.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace distopt {

/// Computes swarm-level metrics against a fixed problem description. Builds
/// the intersection H of the distinct agent sets once; evaluation is pure.
class MetricsEvaluator {
 public:
  MetricsEvaluator(std::vector<ConvexSet> sets, std::vector<Objective> objectives,
                   std::optional<Vector> reference = std::nullopt);

  MetricSample operator()(const SwarmState& state) const;

  const ConvexSet& hull() const { return hull_; }

 private:
  std::vector<ConvexSet> sets_;
  std::vector<Objective> objectives_;
  std::optional<Vector> reference_;
  ConvexSet hull_;  // intersection of the distinct sets
};

/// One-shot convenience wrapper around MetricsEvaluator.
MetricSample measure(const SwarmState& state, const std::vector<ConvexSet>& sets,
                     const std::vector<Objective>& objectives,
                     const std::optional<Vector>& reference = std::nullopt);

using StepRule = std::function<double(long long)>;

/// Diminishing-step rule alpha_k = scale / sqrt(k + 1).
StepRule sqrt_decay_rule(double scale = 0.1);

/// Centralized projected gradient descent on sum_i f_i over H = intersection
/// of the distinct sets, the independent ground-truth oracle for optimum
/// locations. Throws on sustained divergence (windowed best-value increase)
/// or nonfinite iterates.
Vector centralized_oracle(const std::vector<Objective>& objectives,
                          const std::vector<ConvexSet>& sets, const Vector& x0,
                          const StepRule& step_rule = sqrt_decay_rule(),
                          long long iters = 20000);

/// Projected-gradient fixed-point optimality test: s is reported optimal when
/// s lies in H within tol and ||s - P_H(s - alpha g)|| <= alpha * tol for the
/// team gradient g and a small fixed alpha. This is the constrained analogue
/// of grad = 0 and holds at corner optima where the raw gradient does not
/// vanish.
bool verify_kkt(const std::vector<Objective>& objectives,
                const std::vector<ConvexSet>& sets, const Vector& s, double tol);

}  // namespace distopt
