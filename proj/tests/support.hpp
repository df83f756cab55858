#pragma once

// Shared test utilities: seeded draws, brute-force oracles and the random
// scenario generator. The oracles here are intentionally independent of the
// library's projection/solver code paths.

#include "distopt/convex.hpp"
#include "distopt/graph.hpp"
#include "distopt/metrics.hpp"
#include "distopt/objective.hpp"
#include "distopt/scenario.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace testsup {

using distopt::Matrix;
using distopt::Vector;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }
  int pick(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }
  Vector vec(int m, double lo, double hi) {
    Vector v(m);
    for (int c = 0; c < m; ++c) v[c] = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 eng_;
};

/// Brute-force projection: argmin ||y - s|| over feasible grid points of a
/// 2-d box [lo, hi] at the given resolution.
inline Vector grid_project(const std::function<bool(double, double)>& feasible,
                           double lo_x, double hi_x, double lo_y, double hi_y,
                           double res, const Vector& y) {
  Vector best(2);
  double best_d = std::numeric_limits<double>::infinity();
  const long long nx = std::llround((hi_x - lo_x) / res);
  const long long ny = std::llround((hi_y - lo_y) / res);
  for (long long i = 0; i <= nx; ++i) {
    const double x = lo_x + static_cast<double>(i) * res;
    for (long long j = 0; j <= ny; ++j) {
      const double yy = lo_y + static_cast<double>(j) * res;
      if (!feasible(x, yy)) continue;
      const double dx = y[0] - x, dy = y[1] - yy;
      const double d = dx * dx + dy * dy;
      if (d < best_d) {
        best_d = d;
        best << x, yy;
      }
    }
  }
  return best;
}

/// Brute-force minimization of f over feasible grid points of a 2-d box.
inline Vector grid_argmin(const std::function<double(const Vector&)>& f,
                          const std::function<bool(double, double)>& feasible,
                          double lo_x, double hi_x, double lo_y, double hi_y,
                          double res) {
  Vector best(2), probe(2);
  double best_v = std::numeric_limits<double>::infinity();
  const long long nx = std::llround((hi_x - lo_x) / res);
  const long long ny = std::llround((hi_y - lo_y) / res);
  for (long long i = 0; i <= nx; ++i) {
    probe[0] = lo_x + static_cast<double>(i) * res;
    for (long long j = 0; j <= ny; ++j) {
      probe[1] = lo_y + static_cast<double>(j) * res;
      if (!feasible(probe[0], probe[1])) continue;
      const double v = f(probe);
      if (v < best_v) {
        best_v = v;
        best = probe;
      }
    }
  }
  return best;
}

/// Feasibility of the built-in experiment's intersection H, written straight
/// from the set definitions (independent of the ConvexSet projectors).
inline bool sec5_feasible(double x, double y) {
  return x * x + y * y <= 9.0 && x <= 0.5 && y >= 1.0 &&
         x * x + (y - 3.0) * (y - 3.0) <= 9.0 && x >= -0.5;
}

/// Team gradient of the built-in objectives evaluated from the closed-form
/// per-family sums (independent of Objective::grad).
inline Vector sec5_team_gradient(const Vector& s) {
  Vector g = Vector::Zero(2);
  for (int j = 1; j <= 3; ++j) {
    const double c = 0.9 + 0.1 * j;
    for (int axis = 0; axis < 2; ++axis) {
      const double v = s[axis];
      const double w = v + c;
      g[axis] += 2.0 * v + 2.0 * w + 2.0 * v * v * v + 2.0 * w * w * w;
    }
  }
  return g;
}

struct RandomScenarioOptions {
  distopt::ScenarioFamily family = distopt::ScenarioFamily::CT;
  bool quartic = false;      // include quartic local objectives
  double init_scale = 1.0;   // initial-state box half-width
  double horizon = 200.0;
  std::uint64_t seed = 1;
  bool projected = false;    // DT only: gamma = 1 with feasible initial states
};

/// Random multi-agent instance satisfying every assumption by construction:
/// a shared witness point, sets built around it, PD quadratic (optionally
/// quartic) objectives, and a connected or jointly-connected switching graph.
inline distopt::Scenario make_random_scenario(const RandomScenarioOptions& opt) {
  using namespace distopt;
  Rng rng(opt.seed);
  Scenario s;
  s.family = opt.family;
  s.dim = 2 + rng.pick(2);  // 2 or 3
  const int n = 3 + rng.pick(4);
  s.step = 0.1;
  s.horizon = opt.horizon;
  s.stride = 10;
  s.seed = opt.seed + 99;
  s.q0 = 1.0;
  s.name = "random-" + std::to_string(opt.seed);

  const Vector witness = rng.vec(s.dim, -1.0, 1.0);
  s.feasible_point = witness;

  for (int i = 0; i < n; ++i) {
    switch (rng.pick(3)) {
      case 0: {
        const Vector delta = rng.vec(s.dim, -1.0, 1.0);
        s.sets.push_back(ConvexSet::ball(witness + delta, delta.norm() + rng.uniform(1.0, 3.0)));
        break;
      }
      case 1: {
        Vector lo(s.dim), hi(s.dim);
        for (int c = 0; c < s.dim; ++c) {
          lo[c] = witness[c] - rng.uniform(0.5, 2.0);
          hi[c] = witness[c] + rng.uniform(0.5, 2.0);
        }
        s.sets.push_back(ConvexSet::box(lo, hi));
        break;
      }
      default: {
        Vector a = rng.vec(s.dim, -1.0, 1.0);
        if (a.norm() < 1e-3) a[0] = 1.0;
        s.sets.push_back(ConvexSet::halfspace(a, a.dot(witness) + rng.uniform(0.5, 2.0)));
        break;
      }
    }
    const bool quartic_agent = opt.quartic && rng.pick(2) == 0;
    if (quartic_agent) {
      s.objectives.push_back(Objective::shifted_power(rng.vec(s.dim, -1.5, 1.5), 4));
    } else {
      Matrix A(s.dim, s.dim);
      for (int r = 0; r < s.dim; ++r)
        for (int c = 0; c < s.dim; ++c) A(r, c) = rng.uniform(-0.7, 0.7);
      Matrix Q = A.transpose() * A + 0.5 * Matrix::Identity(s.dim, s.dim);
      const Vector target = witness + rng.vec(s.dim, -1.0, 1.0);
      s.objectives.push_back(Objective::quadratic(Q, -Q * target, 0.0));
    }
  }

  // Static ring/complete graph or a two-epoch split of the ring whose union
  // restores it.
  std::vector<std::pair<int, int>> ring_edges;
  for (int i = 0; i < n; ++i) ring_edges.emplace_back(i, (i + 1) % n);
  const GraphFamily gf = opt.family == ScenarioFamily::CT ? GraphFamily::Continuous
                                                          : GraphFamily::Discrete;
  auto build = [&](const std::vector<std::pair<int, int>>& edges) {
    if (gf == GraphFamily::Continuous)
      return graph_from_undirected_edges(n, edges, 0.5, gf);
    return metropolis_weights(edges, n);
  };
  std::vector<Epoch> epochs;
  if (rng.pick(2) == 0) {
    epochs.push_back({0.0, gf == GraphFamily::Continuous
                               ? complete_graph(n, 0.5, gf)
                               : build(ring_edges)});
    s.schedule.emplace(std::move(epochs), 1.0, 1.0, 0.5);
  } else {
    std::vector<std::pair<int, int>> a, b;
    for (size_t k = 0; k < ring_edges.size(); ++k)
      (k % 2 == 0 ? a : b).push_back(ring_edges[k]);
    if (b.empty()) b = a;
    epochs.push_back({0.0, build(a)});
    epochs.push_back({0.5, build(b)});
    s.schedule.emplace(std::move(epochs), 1.0, 1.0, 0.5);
  }

  s.init.kind = InitSpec::Kind::RandomBox;
  s.init.lower = Vector::Constant(s.dim, -opt.init_scale);
  s.init.upper = Vector::Constant(s.dim, opt.init_scale);

  if (opt.family == ScenarioFamily::DT) {
    s.gamma.assign(n, opt.projected ? 1.0 : 0.5);
    if (opt.projected) {
      std::vector<Vector> states = s.initial_states();
      for (int i = 0; i < n; ++i) states[i] = s.sets[i].project(states[i]);
      s.init.kind = InitSpec::Kind::States;
      s.init.states = std::move(states);
    }
  }
  return s;
}

/// Strongly convergent continuous-time instance: quadratic agents sharing one
/// minimizer, so per-agent gradients vanish at consensus and the consensus
/// error decays below 1e-3 well within the horizon. Used by the stepsize
/// ratio checks, which require such a run.
inline distopt::Scenario make_common_minimizer_scenario(std::uint64_t seed,
                                                        double horizon) {
  using namespace distopt;
  Rng rng(seed);
  Scenario s;
  s.family = ScenarioFamily::CT;
  s.dim = 2;
  s.name = "common-minimizer";
  const int n = 4;
  const Vector target = rng.vec(2, -0.5, 0.5);
  s.feasible_point = target;
  for (int i = 0; i < n; ++i) {
    Matrix A(2, 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) A(r, c) = rng.uniform(-0.8, 0.8);
    const Matrix Q = A.transpose() * A + (0.4 + 0.3 * i) * Matrix::Identity(2, 2);
    s.objectives.push_back(Objective::quadratic(Q, -Q * target, 0.0));
    s.sets.push_back(ConvexSet::box(target - rng.vec(2, 1.0, 3.0).cwiseAbs(),
                                    target + rng.vec(2, 1.0, 3.0).cwiseAbs()));
    s.init.states.push_back(target + rng.vec(2, -3.0, 3.0));
  }
  s.init.kind = InitSpec::Kind::States;
  std::vector<Epoch> epochs{{0.0, complete_graph(n, 0.5, GraphFamily::Continuous)}};
  s.schedule.emplace(std::move(epochs), 1.0, 1.0, 0.5);
  s.step = 0.1;
  s.horizon = horizon;
  s.stride = 20;
  s.seed = seed;
  return s;
}

/// Documented a-priori boundedness envelope for generated scenarios: ten
/// times (initial radius + minimizer radius + witness radius + 1).
inline double boundedness_envelope(const distopt::Scenario& s) {
  double r_init = 0.0;
  for (const Vector& x : s.initial_states()) r_init = std::max(r_init, x.norm());
  double r_min = 0.0;
  for (const distopt::Objective& f : s.objectives) {
    const auto ball = f.minimizer_ball();
    r_min = std::max(r_min, ball.center.norm() + ball.radius);
  }
  return 10.0 * (r_init + r_min + s.feasible_point.norm() + 1.0);
}

}  // namespace testsup
