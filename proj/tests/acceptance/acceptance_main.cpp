// Acceptance suite: one pass/fail line per criterion, executed end to end
// (the two built-in reproduction runs go through the actual CLI binary).
//
// usage: distopt_acceptance --cli <path-to-distopt> --workdir <scratch-dir>

#include "distopt/ct.hpp"
#include "distopt/dt.hpp"
#include "distopt/metrics.hpp"
#include "distopt/run.hpp"
#include "distopt/scenario.hpp"

#include "../support.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

using namespace distopt;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_workdir;

struct Outcome {
  bool pass;
  std::string detail;
};

std::map<std::string, std::string> parse_report(const fs::path& path) {
  std::map<std::string, std::string> kv;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    const auto colon = line.find(": ");
    if (colon != std::string::npos)
      kv[line.substr(0, colon)] = line.substr(colon + 2);
  }
  return kv;
}

int run_cli(const std::string& args) {
  const std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

// --- criterion 1: continuous-time built-in reproduction ---------------------
Outcome criterion_ct_reproduction() {
  const fs::path out = g_workdir / "c1_ct";
  const auto t0 = std::chrono::steady_clock::now();
  if (run_cli("builtin sec5 --variant ct --out " + out.string()) != 0)
    return {false, "CLI run failed"};
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto kv = parse_report(out / "report.txt");
  if (!kv.count("terminal_max_agent_opt_dist")) return {false, "report incomplete"};
  const double err = std::stod(kv.at("terminal_max_agent_opt_dist"));

  // Lyapunov diagnostic along the exported metrics: terminal V1 <= 1e-2 and
  // non-increasing on at least 90% of consecutive samples past the transient.
  std::ifstream metrics(out / "metrics.csv");
  std::string line;
  std::getline(metrics, line);  // header
  std::vector<double> times, v1;
  while (std::getline(metrics, line)) {
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    times.push_back(std::stod(cell));
    for (int skip = 0; skip < 3; ++skip) std::getline(row, cell, ',');
    std::getline(row, cell, ',');
    v1.push_back(std::stod(cell));
  }
  if (v1.empty()) return {false, "metrics.csv empty"};
  long long pairs = 0, nonincreasing = 0;
  for (size_t k = 1; k < v1.size(); ++k) {
    if (times[k - 1] < 0.1 * times.back()) continue;
    ++pairs;
    if (v1[k] <= v1[k - 1] + 1e-15) ++nonincreasing;
  }
  const double frac = pairs ? double(nonincreasing) / double(pairs) : 0.0;
  const double terminal_v1 = v1.back();

  const double max_norm = std::stod(kv.at("max_state_norm"));
  const double envelope =
      testsup::boundedness_envelope(builtin_sec5(Sec5Variant::CT));

  const bool ok = err <= 0.1 && wall <= 60.0 && terminal_v1 <= 1e-2 &&
                  frac >= 0.9 && max_norm <= envelope;
  return {ok, "max_i ||x_i(end) - (-0.5, 1)|| = " + fmt(err) + " (tol 0.1), " +
                  fmt(wall, 3) + " s (limit 60); V1(end) = " + fmt(terminal_v1, 3) +
                  " (tol 1e-2), non-increasing on " + fmt(100 * frac, 3) +
                  "% of samples; max state norm " + fmt(max_norm, 3) +
                  " within envelope " + fmt(envelope, 3)};
}

// --- criterion 2: discrete-time gamma = 1 reproduction ----------------------
Outcome criterion_dt_reproduction() {
  const fs::path out = g_workdir / "c2_dt";
  if (run_cli("builtin sec5 --variant dt-projected --out " + out.string()) != 0)
    return {false, "CLI run failed"};
  const auto kv = parse_report(out / "report.txt");
  if (!kv.count("terminal_max_agent_opt_dist") || !kv.count("feasibility_violations"))
    return {false, "report incomplete"};
  const double err = std::stod(kv.at("terminal_max_agent_opt_dist"));
  const long long violations = std::stoll(kv.at("feasibility_violations"));
  const bool ok = err <= 0.1 && violations == 0;
  return {ok, "terminal err " + fmt(err) + " (tol 0.1), feasibility_violations " +
                  std::to_string(violations)};
}

// --- criterion 3: projection inequality suite --------------------------------
Outcome criterion_projection_properties() {
  testsup::Rng rng(2024);
  const double tol = 1e-9;
  long long checked = 0;
  for (int variant = 0; variant < 4; ++variant) {
    for (int trial = 0; trial < 1000; ++trial) {
      const int m = 2 + rng.pick(2);
      const Vector anchor = rng.vec(m, -1.0, 1.0);
      auto make_one = [&](int which) -> ConvexSet {
        switch (which) {
          case 0: {
            const Vector d = rng.vec(m, -1.0, 1.0);
            return ConvexSet::ball(anchor + d, d.norm() + rng.uniform(0.5, 2.5));
          }
          case 1: {
            Vector lo(m), hi(m);
            for (int c = 0; c < m; ++c) {
              lo[c] = anchor[c] - rng.uniform(0.3, 2.0);
              hi[c] = anchor[c] + rng.uniform(0.3, 2.0);
            }
            return ConvexSet::box(lo, hi);
          }
          default: {
            Vector a = rng.vec(m, -1.0, 1.0);
            if (a.norm() < 1e-3) a[0] = 1.0;
            return ConvexSet::halfspace(a, a.dot(anchor) + rng.uniform(0.2, 2.0));
          }
        }
      };
      const ConvexSet set =
          variant < 3 ? make_one(variant)
                      : ConvexSet::intersection(
                            {make_one(rng.pick(3)), make_one(rng.pick(3)),
                             make_one(rng.pick(3))},
                            1e-12, 1000000);
      const Vector y = rng.vec(m, -6.0, 6.0);
      const Vector z = rng.vec(m, -6.0, 6.0);
      const Vector py = set.project(y);
      const Vector pz = set.project(z);
      const Vector xi = set.project(rng.vec(m, -6.0, 6.0));
      if ((py - pz).norm() > (y - z).norm() + tol)
        return {false, "non-expansiveness violated"};
      if ((y - py).dot(y - xi) < -tol) return {false, "obtuse angle violated"};
      if ((py - xi).squaredNorm() >
          (y - xi).squaredNorm() - (py - y).squaredNorm() + tol)
        return {false, "pythagoras bound violated"};
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " randomized cases within 1e-9"};
}

// --- criterion 4: analytic vs finite-difference gradients --------------------
Outcome criterion_gradient_correctness() {
  testsup::Rng rng(515);
  double worst = 0.0;
  for (int variant = 0; variant < 3; ++variant) {
    for (int trial = 0; trial < 100; ++trial) {
      const int m = 2 + rng.pick(2);
      Objective f = [&] {
        switch (variant) {
          case 0:
            return Objective::shifted_power(rng.vec(m, -2.0, 2.0),
                                            2 * (1 + rng.pick(3)));
          case 1: {
            Matrix A(m, m);
            for (int r = 0; r < m; ++r)
              for (int c = 0; c < m; ++c) A(r, c) = rng.uniform(-1.0, 1.0);
            return Objective::quadratic(A.transpose() * A + 0.3 * Matrix::Identity(m, m),
                                        rng.vec(m, -1.0, 1.0), rng.uniform(-1.0, 1.0));
          }
          default:
            return Objective::sum({Objective::shifted_power(rng.vec(m, -1.0, 1.0), 2),
                                   Objective::shifted_power(rng.vec(m, -1.0, 1.0), 4)});
        }
      }();
      worst = std::max(worst, f.grad_check(rng.vec(m, -2.0, 2.0), 1e-5));
    }
  }
  return {worst <= 1e-6, "300 points, worst relative error " + fmt(worst, 3) +
                             " (tol 1e-6, h = 1e-5)"};
}

// --- criterion 5: distributed run vs centralized oracle vs grid --------------
Outcome criterion_oracle_equivalence() {
  testsup::Rng rng(606);
  // three PD quadratics over boxes sharing a witness, static complete graph
  Scenario s;
  s.family = ScenarioFamily::CT;
  s.dim = 2;
  s.name = "oracle-equivalence";
  const Vector witness = rng.vec(2, -0.5, 0.5);
  s.feasible_point = witness;
  for (int i = 0; i < 3; ++i) {
    Matrix A(2, 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) A(r, c) = rng.uniform(-0.7, 0.7);
    const Matrix Q = A.transpose() * A + 0.5 * Matrix::Identity(2, 2);
    const Vector target = witness + rng.vec(2, -1.0, 1.0);
    s.objectives.push_back(Objective::quadratic(Q, -Q * target, 0.0));
    Vector lo(2), hi(2);
    for (int c = 0; c < 2; ++c) {
      lo[c] = witness[c] - rng.uniform(0.5, 1.5);
      hi[c] = witness[c] + rng.uniform(0.5, 1.5);
    }
    s.sets.push_back(ConvexSet::box(lo, hi));
  }
  std::vector<Epoch> epochs{{0.0, complete_graph(3, 0.5, GraphFamily::Continuous)}};
  s.schedule.emplace(std::move(epochs), 1.0, 1.0, 0.5);
  s.step = 0.1;
  s.horizon = 40000.0;
  s.stride = 1000;
  s.init.kind = InitSpec::Kind::States;
  for (int i = 0; i < 3; ++i) s.init.states.push_back(rng.vec(2, -2.0, 2.0));
  if (!validate_scenario(s).pass()) return {false, "instance failed validation"};

  const Trajectory t = simulate_ct(s);
  const Vector mean = t.terminal().state.mean();
  const Vector oracle = centralized_oracle(s.objectives, s.sets, witness);

  Vector lo(2), hi(2);
  for (int c = 0; c < 2; ++c) {
    lo[c] = -3.0;
    hi[c] = 3.0;
  }
  for (const ConvexSet& b : s.sets) {
    lo = lo.cwiseMax(b.lower());
    hi = hi.cwiseMin(b.upper());
  }
  auto feasible = [&](double a, double b) {
    return a >= lo[0] && a <= hi[0] && b >= lo[1] && b <= hi[1];
  };
  auto team = [&](const Vector& p) {
    double v = 0.0;
    for (const Objective& f : s.objectives) v += f.eval(p);
    return v;
  };
  const Vector grid =
      testsup::grid_argmin(team, feasible, lo[0], hi[0], lo[1], hi[1], 1e-3);

  const double dist_mean = (mean - oracle).norm();
  const double dist_grid = (oracle - grid).norm();
  const bool ok = dist_mean <= 1e-2 && dist_grid <= 2e-3;
  return {ok, "|distributed mean - oracle| = " + fmt(dist_mean, 3) +
                  " (tol 1e-2); |oracle - grid| = " + fmt(dist_grid, 3) +
                  " (tol 2e-3)"};
}

// --- criterion 6: stepsize ratios tighten on a convergent run ----------------
Outcome criterion_q_ratio() {
  Scenario s = testsup::make_common_minimizer_scenario(33, 4000.0);
  if (!validate_scenario(s).pass()) return {false, "instance failed validation"};
  const Trajectory t = simulate_ct(s);
  const double consensus = t.terminal().metrics.consensus_err;
  if (consensus > 1e-3)
    return {false, "run not convergent enough: consensus " + fmt(consensus, 3)};

  auto spread = [&](size_t from, size_t to) {
    double worst = 0.0;
    for (size_t k = from; k < to; ++k) {
      const auto& agents = t.samples[k].state.agents;
      for (size_t i = 0; i < agents.size(); ++i)
        for (size_t j = 0; j < agents.size(); ++j)
          worst = std::max(worst, std::abs(agents[i].q / agents[j].q - 1.0));
    }
    return worst;
  };
  const size_t S = t.samples.size();
  const double early = spread(0, S / 10 + 1);
  const double late = spread(S - S / 10 - 1, S);
  return {late < early, "max |q_i/q_j - 1|: first decile " + fmt(early, 3) +
                            ", last decile " + fmt(late, 3)};
}

// --- criterion 7: boundedness guard over randomized scenarios ----------------
Outcome criterion_boundedness() {
  int ran = 0;
  for (int k = 0; k < 20; ++k) {
    testsup::RandomScenarioOptions opt;
    opt.seed = 1000 + k;
    opt.horizon = 300.0;
    // Lanes: continuous quadratics take initial norms up to 1e3; quartics are
    // exercised in discrete time, where the switching rule tames them (the
    // continuous algorithm under quartic gradients at such distances is not
    // integrable at the fixed paper step).
    switch (k % 4) {
      case 0:
        opt.family = ScenarioFamily::CT;
        opt.init_scale = 1000.0;
        opt.quartic = false;
        break;
      case 1:
        opt.family = ScenarioFamily::DT;
        opt.init_scale = 1000.0;
        opt.quartic = true;
        break;
      case 2:
        opt.family = ScenarioFamily::CT;
        opt.init_scale = 2.0;
        opt.quartic = true;
        break;
      default:
        opt.family = ScenarioFamily::DT;
        opt.init_scale = 500.0;
        opt.quartic = false;
        opt.projected = true;
        break;
    }
    Scenario s = testsup::make_random_scenario(opt);
    if (!validate_scenario(s).pass()) return {false, "instance failed validation"};
    const double envelope = testsup::boundedness_envelope(s);
    Trajectory t;
    try {
      t = s.family == ScenarioFamily::CT ? simulate_ct(s) : simulate_dt(s);
    } catch (const SimulationError& e) {
      return {false, "seed " + std::to_string(opt.seed) + ": " + e.what()};
    }
    if (t.nonfinite)
      return {false, "seed " + std::to_string(opt.seed) + ": nonfinite state"};
    if (t.max_state_norm > envelope)
      return {false, "seed " + std::to_string(opt.seed) + ": max norm " +
                         fmt(t.max_state_norm, 3) + " exceeds envelope " +
                         fmt(envelope, 3)};
    ++ran;
  }
  return {true, "20 randomized scenarios stayed within the documented envelope, "
                "no NaN/Inf"};
}

// --- criterion 8: switching mechanism on the scaled built-in run -------------
Outcome criterion_switching() {
  Scenario s = builtin_sec5(Sec5Variant::DtProjected, /*init_scale=*/100.0);
  if (!validate_scenario(s).pass()) return {false, "scenario failed validation"};
  const Trajectory t = simulate_dt(s);
  const long long N = t.total_steps;
  const bool fired_early = t.gr_zero_first_step >= 0 && t.gr_zero_first_step < N / 4;
  const bool silent_late = t.gr_zero_last_step < N / 2;
  const bool ok = fired_early && silent_late && !t.nonfinite;
  return {ok, "first firing at step " + std::to_string(t.gr_zero_first_step) +
                  " (< N/4 = " + std::to_string(N / 4) + "), last at " +
                  std::to_string(t.gr_zero_last_step) + " (< N/2 = " +
                  std::to_string(N / 2) + ")"};
}

// --- criterion 9: assumption validators name their violation -----------------
Outcome criterion_validators() {
  // (a) unbalanced continuous epoch
  Scenario a = builtin_sec5(Sec5Variant::CT);
  Matrix w = Matrix::Zero(24, 24);
  for (int i = 0; i + 1 < 24; ++i) w(i + 1, i) = 0.5;  // one-way open chain
  std::vector<Epoch> ea{{0.0, WeightedDigraph::continuous(std::move(w), 0.5)}};
  a.schedule.emplace(std::move(ea), 1.0, 1.0, 0.5);
  bool a_named = false;
  for (const auto& issue : validate_scenario(a).issues)
    a_named = a_named || issue.assumption == "Assumption 3 (balanced graphs)";
  if (!a_named) return {false, "unbalanced epoch not named as Assumption 3"};

  // (b) discrete matrix whose third column sums to 0.9
  Scenario b = builtin_sec5(Sec5Variant::DtProjected);
  b.objectives.erase(b.objectives.begin() + 3, b.objectives.end());
  b.sets.erase(b.sets.begin() + 3, b.sets.end());
  b.gamma.assign(3, 1.0);
  Matrix ds(3, 3);
  ds << 0.35, 0.35, 0.30, 0.35, 0.35, 0.30, 0.35, 0.35, 0.30;
  std::vector<Epoch> eb{{0.0, WeightedDigraph::discrete(std::move(ds), 0.3)}};
  b.schedule.emplace(std::move(eb), 1.0, 1.0);
  b.init.kind = InitSpec::Kind::States;
  b.init.states.assign(3, Vector{{0.0, 1.5}});
  bool b_named = false;
  for (const auto& issue : validate_scenario(b).issues)
    b_named = b_named || (issue.assumption == "Assumption 6 (doubly stochastic)" &&
                          issue.message.find("column 3 sums to 0.9") !=
                              std::string::npos);
  if (!b_named) return {false, "bad column not named as Assumption 6"};

  // (c) disconnected union (one agent isolated forever)
  Scenario c = builtin_sec5(Sec5Variant::CT);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < 23; ++i) edges.emplace_back(i, i + 1);
  std::vector<Epoch> ec{
      {0.0, graph_from_undirected_edges(24, edges, 0.5, GraphFamily::Continuous)}};
  c.schedule.emplace(std::move(ec), 1.0, 1.0, 0.5);
  bool c_named = false;
  for (const auto& issue : validate_scenario(c).issues)
    c_named = c_named || issue.assumption == "Assumption 5 (joint connectivity)";
  if (!c_named) return {false, "disconnected union not named as Assumption 5"};

  return {true, "unbalanced epoch -> A3; column sum 0.9 -> A6; disconnected "
                "union -> A5"};
}

// --- criterion 10: determinism --------------------------------------------
Outcome criterion_determinism() {
  const std::string args = "builtin sec5 --variant dt-projected --horizon 2000 "
                           "--stride 200 --out ";
  const fs::path d1 = g_workdir / "c10_a";
  const fs::path d2 = g_workdir / "c10_b";
  if (run_cli(args + d1.string()) != 0 || run_cli(args + d2.string()) != 0)
    return {false, "CLI runs failed"};
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  const bool traj = slurp(d1 / "trajectory.csv") == slurp(d2 / "trajectory.csv");
  const bool metrics = slurp(d1 / "metrics.csv") == slurp(d2 / "metrics.csv");
  const bool nonempty = slurp(d1 / "trajectory.csv").size() > 1000;
  return {traj && metrics && nonempty,
          std::string("trajectory.csv ") + (traj ? "identical" : "DIFFER") +
              ", metrics.csv " + (metrics ? "identical" : "DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli") g_cli = argv[i + 1];
    if (flag == "--workdir") g_workdir = argv[i + 1];
  }
  if (g_cli.empty() || g_workdir.empty()) {
    std::cerr << "usage: distopt_acceptance --cli <distopt binary> --workdir <dir>\n";
    return 2;
  }
  fs::create_directories(g_workdir);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"built-in reproduction, continuous time", criterion_ct_reproduction},
      {"built-in reproduction, discrete time gamma=1", criterion_dt_reproduction},
      {"projection property suite", criterion_projection_properties},
      {"gradient correctness", criterion_gradient_correctness},
      {"oracle equivalence on a small instance", criterion_oracle_equivalence},
      {"stepsize ratio convergence", criterion_q_ratio},
      {"boundedness guard", criterion_boundedness},
      {"switching mechanism behavior", criterion_switching},
      {"assumption validators", criterion_validators},
      {"determinism", criterion_determinism},
  };

  int failures = 0;
  for (size_t k = 0; k < criteria.size(); ++k) {
    Outcome outcome{false, "exception"};
    try {
      outcome = criteria[k].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("[%2zu/10] %s  %s — %s\n", k + 1, outcome.pass ? "PASS" : "FAIL",
                criteria[k].first.c_str(), outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("ACCEPTANCE: %d/10 criteria passed\n",
              static_cast<int>(criteria.size()) - failures);
  return failures == 0 ? 0 : 1;
}
