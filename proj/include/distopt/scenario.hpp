#pragma once

#include "distopt/convex.hpp"
#include "distopt/graph.hpp"
#include "distopt/objective.hpp"
#include "distopt/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace distopt {

enum class ScenarioFamily { CT, DT };

struct InitSpec {
  enum class Kind { States, RandomBox };
  Kind kind = Kind::RandomBox;
  std::vector<Vector> states;  // Kind::States
  Vector lower, upper;         // Kind::RandomBox
};

/// Full experiment description. Times (step, horizon, schedule epochs) are in
/// seconds for both families; a discrete run executes horizon/step steps of
/// sample time T = step.
struct Scenario {
  std::string name;
  ScenarioFamily family = ScenarioFamily::CT;
  int dim = 0;
  std::vector<Objective> objectives;
  std::vector<ConvexSet> sets;
  std::optional<GraphSchedule> schedule;
  double step = 0.1;
  double horizon = 0.0;
  std::vector<double> gamma;  // DT only, one entry per agent, each in (0, 1]
  InitSpec init;
  double q0 = 1.0;
  long long stride = 1;
  std::uint64_t seed = 0;
  Vector feasible_point;            // witness for H != {} (Assumption 2)
  std::optional<Vector> reference;  // known optimum, enables opt_dist

  int agent_count() const { return static_cast<int>(objectives.size()); }
  long long total_steps() const;

  /// Resolves the initial states; RandomBox draws are a deterministic
  /// function of the seed.
  std::vector<Vector> initial_states() const;

  /// True when every gamma equals 1 (constraint-preserving mode).
  bool projected_mode() const;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(msg), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses a scenario from its JSON text form. Throws ParseError (with line
/// and column) on malformed input. Schema violations carry the offending
/// field path in the message. The result is not yet validated against the
/// assumptions; see validate_scenario.
Scenario parse_scenario(const std::string& text);

/// Canonical JSON form; parse(serialize(s)) == s for scenarios produced by
/// this library.
std::string serialize_scenario(const Scenario& scenario);

/// Checks the scenario against the assumptions required by its family:
///   Assumption 1 (bounded minimizer sets), Assumption 2 (nonempty
///   intersection, via the feasible witness point), Assumption 3 (balanced
///   graphs, CT), Assumption 4 (dwell time, CT), Assumption 5/7 (joint
///   connectivity), Assumption 6 (doubly stochastic, DT), plus the
///   projected-mode hypothesis x_i(0) in H_i and structural consistency.
ValidationReport validate_scenario(const Scenario& scenario);

enum class Sec5Variant { CT, DtMixed, DtProjected };

/// The built-in 24-agent planar experiment: 8 objective families x 3 shift
/// values, four constraint sets, a two-row ring communication graph whose
/// schedule round-robins over its two perfect matchings. init_scale inflates
/// the initial-state box (projected-mode initial states are re-projected into
/// their sets).
Scenario builtin_sec5(Sec5Variant variant, double init_scale = 1.0,
                      std::uint64_t seed = 7);

}  // namespace distopt
