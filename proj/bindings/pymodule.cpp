#include "distopt/ct.hpp"
#include "distopt/dt.hpp"
#include "distopt/metrics.hpp"
#include "distopt/run.hpp"
#include "distopt/scenario.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace distopt;

namespace {

py::array_t<double> positions_array(const Trajectory& t) {
  if (t.samples.empty()) return py::array_t<double>();
  const auto S = static_cast<py::ssize_t>(t.samples.size());
  const auto n = static_cast<py::ssize_t>(t.samples.front().state.agent_count());
  const auto m = static_cast<py::ssize_t>(t.samples.front().state.dim());
  py::array_t<double> out({S, n, m});
  auto w = out.mutable_unchecked<3>();
  for (py::ssize_t s = 0; s < S; ++s)
    for (py::ssize_t i = 0; i < n; ++i)
      for (py::ssize_t c = 0; c < m; ++c)
        w(s, i, c) = t.samples[s].state.agents[i].x[c];
  return out;
}

py::array_t<double> q_array(const Trajectory& t) {
  const auto S = static_cast<py::ssize_t>(t.samples.size());
  const auto n = S ? static_cast<py::ssize_t>(t.samples.front().state.agent_count()) : 0;
  py::array_t<double> out({S, n});
  auto w = out.mutable_unchecked<2>();
  for (py::ssize_t s = 0; s < S; ++s)
    for (py::ssize_t i = 0; i < n; ++i) w(s, i) = t.samples[s].state.agents[i].q;
  return out;
}

py::array_t<double> metric_array(const Trajectory& t,
                                 double (*get)(const MetricSample&)) {
  py::array_t<double> out(static_cast<py::ssize_t>(t.samples.size()));
  auto w = out.mutable_unchecked<1>();
  for (py::ssize_t s = 0; s < w.shape(0); ++s) w(s) = get(t.samples[s].metrics);
  return out;
}

}  // namespace

PYBIND11_MODULE(_distopt, mod) {
  mod.doc() =
      "Distributed constrained consensus optimization: switching-graph "
      "projected dynamics with state-dependent stepsizes.";

  py::register_exception<ParseError>(mod, "ScenarioParseError");
  py::register_exception<DykstraError>(mod, "DykstraNoConvergence");
  py::register_exception<StepAlignmentError>(mod, "StepAlignment");

  py::enum_<GraphFamily>(mod, "GraphFamily")
      .value("CONTINUOUS", GraphFamily::Continuous)
      .value("DISCRETE", GraphFamily::Discrete);

  py::class_<WeightedDigraph>(mod, "WeightedDigraph")
      .def_static("continuous", &WeightedDigraph::continuous, py::arg("weights"),
                  py::arg("eta"))
      .def_static("discrete", &WeightedDigraph::discrete, py::arg("weights"),
                  py::arg("eta"))
      .def_property_readonly("n", &WeightedDigraph::size)
      .def_property_readonly("eta", &WeightedDigraph::eta)
      .def_property_readonly("family", &WeightedDigraph::family)
      .def("weights", &WeightedDigraph::weights)
      .def("laplacian", &WeightedDigraph::laplacian)
      .def("is_balanced", &WeightedDigraph::is_balanced, py::arg("tol") = 1e-9)
      .def("is_doubly_stochastic", &WeightedDigraph::is_doubly_stochastic,
           py::arg("tol") = 1e-9)
      .def("is_strongly_connected", &WeightedDigraph::is_strongly_connected);

  mod.def("ring_graph", &ring_graph, py::arg("n"), py::arg("weight"),
          py::arg("family") = GraphFamily::Continuous);
  mod.def("path_graph", &path_graph, py::arg("n"), py::arg("weight"),
          py::arg("family") = GraphFamily::Continuous);
  mod.def("complete_graph", &complete_graph, py::arg("n"), py::arg("weight"),
          py::arg("family") = GraphFamily::Continuous);
  mod.def("metropolis_weights", &metropolis_weights, py::arg("edges"), py::arg("n"));
  mod.def("laplacian_spectrum_check", &laplacian_spectrum_check, py::arg("graph"),
          py::arg("tol") = 1e-9);

  py::class_<Epoch>(mod, "Epoch")
      .def(py::init<double, WeightedDigraph>(), py::arg("start"), py::arg("graph"))
      .def_readonly("start", &Epoch::start)
      .def_readonly("graph", &Epoch::graph);

  py::class_<GraphSchedule>(mod, "GraphSchedule")
      .def(py::init<std::vector<Epoch>, double, double, double>(), py::arg("epochs"),
           py::arg("period"), py::arg("window"), py::arg("dwell") = 0.0)
      .def_property_readonly("period", &GraphSchedule::period)
      .def_property_readonly("window", &GraphSchedule::window)
      .def_property_readonly("dwell", &GraphSchedule::dwell)
      .def("graph_at", &GraphSchedule::graph_at, py::arg("t"),
           py::return_value_policy::reference_internal);

  mod.def("union_graph", &union_graph, py::arg("schedule"), py::arg("start"),
          py::arg("end"));

  py::class_<ValidationIssue>(mod, "ValidationIssue")
      .def_readonly("assumption", &ValidationIssue::assumption)
      .def_readonly("message", &ValidationIssue::message)
      .def("__repr__", &ValidationIssue::formatted);

  py::class_<ValidationReport>(mod, "ValidationReport")
      .def_property_readonly("ok", &ValidationReport::pass)
      .def_readonly("issues", &ValidationReport::issues)
      .def("summary", &ValidationReport::summary);

  mod.def("validate_schedule", &validate_schedule, py::arg("schedule"),
          py::arg("family"));

  py::class_<ConvexSet>(mod, "ConvexSet")
      .def_static("ball", &ConvexSet::ball, py::arg("center"), py::arg("radius"))
      .def_static("box", &ConvexSet::box, py::arg("lower"), py::arg("upper"))
      .def_static("halfspace", &ConvexSet::halfspace, py::arg("normal"),
                  py::arg("offset"))
      .def_static("intersection", &ConvexSet::intersection, py::arg("members"),
                  py::arg("tol") = 1e-10, py::arg("max_iter") = 10000)
      .def_static("whole_space", &ConvexSet::whole_space, py::arg("dim"))
      .def_property_readonly("dim", &ConvexSet::dim)
      .def("project", &ConvexSet::project, py::arg("y"))
      .def("distance", &ConvexSet::distance, py::arg("y"))
      .def("contains", &ConvexSet::contains, py::arg("y"), py::arg("tol") = 1e-9);

  mod.def("dykstra", &dykstra, py::arg("sets"), py::arg("y"), py::arg("tol") = 1e-10,
          py::arg("max_iter") = 10000);

  py::class_<Objective::MinimizerBall>(mod, "MinimizerBall")
      .def_readonly("center", &Objective::MinimizerBall::center)
      .def_readonly("radius", &Objective::MinimizerBall::radius);

  py::class_<Objective>(mod, "Objective")
      .def_static("shifted_power", &Objective::shifted_power, py::arg("shift"),
                  py::arg("exponent"))
      .def_static("quadratic", &Objective::quadratic, py::arg("Q"), py::arg("q"),
                  py::arg("r") = 0.0)
      .def_static("sum", &Objective::sum, py::arg("terms"))
      .def_property_readonly("dim", &Objective::dim)
      .def("__call__", &Objective::eval, py::arg("x"))
      .def("eval", &Objective::eval, py::arg("x"))
      .def("grad", &Objective::grad, py::arg("x"))
      .def("grad_check", &Objective::grad_check, py::arg("x"), py::arg("h") = 1e-5)
      .def("minimizer_ball", &Objective::minimizer_ball);

  py::class_<AgentState>(mod, "AgentState")
      .def(py::init([](Vector x, double q) {
             return AgentState{std::move(x), q};
           }),
           py::arg("x"), py::arg("q") = 1.0)
      .def_readwrite("x", &AgentState::x)
      .def_readwrite("q", &AgentState::q);

  py::class_<SwarmState>(mod, "SwarmState")
      .def(py::init([](double time, std::vector<AgentState> agents) {
             return SwarmState{time, std::move(agents)};
           }),
           py::arg("time"), py::arg("agents"))
      .def_readwrite("time", &SwarmState::time)
      .def_readwrite("agents", &SwarmState::agents)
      .def("mean", &SwarmState::mean);

  py::class_<MetricSample>(mod, "MetricSample")
      .def_readonly("time", &MetricSample::time)
      .def_readonly("consensus_err", &MetricSample::consensus_err)
      .def_readonly("feas_err", &MetricSample::feas_err)
      .def_readonly("per_set_dists", &MetricSample::per_set_dists)
      .def_readonly("team_value", &MetricSample::team_value)
      .def_readonly("V1", &MetricSample::V1)
      .def_readonly("opt_dist", &MetricSample::opt_dist)
      .def_readonly("V2", &MetricSample::V2);

  py::class_<Trajectory>(mod, "Trajectory")
      .def_property_readonly("total_steps",
                             [](const Trajectory& t) { return t.total_steps; })
      .def_property_readonly("max_state_norm",
                             [](const Trajectory& t) { return t.max_state_norm; })
      .def_property_readonly("nonfinite", [](const Trajectory& t) { return t.nonfinite; })
      .def_property_readonly("gr_zero_total",
                             [](const Trajectory& t) { return t.gr_zero_total; })
      .def_property_readonly("gr_zero_first_step",
                             [](const Trajectory& t) { return t.gr_zero_first_step; })
      .def_property_readonly("gr_zero_last_step",
                             [](const Trajectory& t) { return t.gr_zero_last_step; })
      .def_property_readonly("feasibility_violations",
                             [](const Trajectory& t) { return t.feasibility_violations; })
      .def("times",
           [](const Trajectory& t) {
             return metric_array(t, [](const MetricSample& m) { return m.time; });
           })
      .def("positions", &positions_array)
      .def("stepsizes", &q_array)
      .def("consensus_err",
           [](const Trajectory& t) {
             return metric_array(t, [](const MetricSample& m) { return m.consensus_err; });
           })
      .def("feas_err",
           [](const Trajectory& t) {
             return metric_array(t, [](const MetricSample& m) { return m.feas_err; });
           })
      .def("team_value",
           [](const Trajectory& t) {
             return metric_array(t, [](const MetricSample& m) { return m.team_value; });
           })
      .def("V1",
           [](const Trajectory& t) {
             return metric_array(t, [](const MetricSample& m) { return m.V1; });
           })
      .def("terminal_metrics",
           [](const Trajectory& t) { return t.terminal().metrics; });

  py::enum_<ScenarioFamily>(mod, "ScenarioFamily")
      .value("CT", ScenarioFamily::CT)
      .value("DT", ScenarioFamily::DT);

  py::enum_<Sec5Variant>(mod, "Sec5Variant")
      .value("CT", Sec5Variant::CT)
      .value("DT_MIXED", Sec5Variant::DtMixed)
      .value("DT_PROJECTED", Sec5Variant::DtProjected);

  py::class_<Scenario>(mod, "Scenario")
      .def_readwrite("name", &Scenario::name)
      .def_readwrite("family", &Scenario::family)
      .def_readwrite("dim", &Scenario::dim)
      .def_readwrite("objectives", &Scenario::objectives)
      .def_readwrite("sets", &Scenario::sets)
      .def_readwrite("step", &Scenario::step)
      .def_readwrite("horizon", &Scenario::horizon)
      .def_readwrite("gamma", &Scenario::gamma)
      .def_readwrite("q0", &Scenario::q0)
      .def_readwrite("stride", &Scenario::stride)
      .def_readwrite("seed", &Scenario::seed)
      .def_readwrite("feasible_point", &Scenario::feasible_point)
      .def_readwrite("reference", &Scenario::reference)
      .def_property_readonly("agent_count", &Scenario::agent_count)
      .def("initial_states", &Scenario::initial_states);

  mod.def("parse_scenario", &parse_scenario, py::arg("text"));
  mod.def("serialize_scenario", &serialize_scenario, py::arg("scenario"));
  mod.def("validate_scenario", &validate_scenario, py::arg("scenario"));
  mod.def("builtin_sec5", &builtin_sec5, py::arg("variant"),
          py::arg("init_scale") = 1.0, py::arg("seed") = 7);

  mod.def("simulate_ct", &simulate_ct, py::arg("scenario"),
          py::call_guard<py::gil_scoped_release>());
  mod.def("simulate_dt", &simulate_dt, py::arg("scenario"),
          py::call_guard<py::gil_scoped_release>());
  mod.def(
      "simulate",
      [](const Scenario& s) {
        py::gil_scoped_release release;
        return s.family == ScenarioFamily::CT ? simulate_ct(s) : simulate_dt(s);
      },
      py::arg("scenario"));

  mod.def("measure", &measure, py::arg("state"), py::arg("sets"),
          py::arg("objectives"), py::arg("reference") = std::nullopt);
  mod.def("centralized_oracle", &centralized_oracle, py::arg("objectives"),
          py::arg("sets"), py::arg("x0"), py::arg("step_rule") = sqrt_decay_rule(),
          py::arg("iters") = 20000);
  mod.def("sqrt_decay_rule", &sqrt_decay_rule, py::arg("scale") = 0.1);
  mod.def("verify_kkt", &verify_kkt, py::arg("objectives"), py::arg("sets"),
          py::arg("s"), py::arg("tol") = 1e-6);

  mod.def(
      "run_scenario",
      [](const Scenario& s, const std::string& out_dir) {
        py::gil_scoped_release release;
        return run_scenario(s, out_dir);
      },
      py::arg("scenario"), py::arg("out_dir"));

  py::class_<RunResult>(mod, "RunResult")
      .def_readonly("ok", &RunResult::ok)
      .def_readonly("error", &RunResult::error)
      .def_readonly("trajectory", &RunResult::trajectory)
      .def_readonly("runtime_seconds", &RunResult::runtime_seconds)
      .def_readonly("out_dir", &RunResult::out_dir);
}
