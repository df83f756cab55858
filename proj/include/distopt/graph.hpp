#pragma once

#include "distopt/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace distopt {

/// Self-loop convention of a communication graph. Continuous-time graphs have
/// a zero diagonal; discrete-time graphs carry self-weights a_ii >= eta so the
/// weight matrix can be doubly stochastic.
enum class GraphFamily { Continuous, Discrete };

/// Weighted directed communication graph on n agents. weights(i, j) = a_ij is
/// the weight agent i places on information received from agent j, i.e. the
/// edge (j, i). Every nonzero weight is at least eta. Immutable once built.
class WeightedDigraph {
 public:
  WeightedDigraph(GraphFamily family, Matrix weights, double eta);

  static WeightedDigraph continuous(Matrix weights, double eta);
  static WeightedDigraph discrete(Matrix weights, double eta);

  int size() const { return static_cast<int>(weights_.rows()); }
  GraphFamily family() const { return family_; }
  double eta() const { return eta_; }
  const Matrix& weights() const { return weights_; }
  double weight(int i, int j) const { return weights_(i, j); }

  /// L_ii = sum_{j != i} a_ij, L_ij = -a_ij. Diagonal self-weights (discrete
  /// family) do not enter the Laplacian.
  Matrix laplacian() const;

  /// In-weight sum equals out-weight sum at every node, within tol.
  bool is_balanced(double tol) const;

  /// All row and column sums equal to 1 within tol and a_ii >= eta for all i.
  bool is_doubly_stochastic(double tol) const;

  /// Directed path between every ordered pair of agents (SCC test on the
  /// boolean off-diagonal adjacency; weights and self-loops are ignored).
  bool is_strongly_connected() const;

  /// Pairs (j, a_ij) with a_ij != 0. Excludes the diagonal.
  std::vector<std::pair<int, double>> in_neighbors(int i) const;

 private:
  GraphFamily family_;
  Matrix weights_;
  double eta_;
};

/// Symmetric undirected graph from an edge list with one uniform weight.
WeightedDigraph graph_from_undirected_edges(
    int n, const std::vector<std::pair<int, int>>& edges, double weight,
    GraphFamily family);

WeightedDigraph ring_graph(int n, double weight, GraphFamily family);
WeightedDigraph path_graph(int n, double weight, GraphFamily family);
WeightedDigraph complete_graph(int n, double weight, GraphFamily family);

/// Doubly stochastic discrete-family graph from an undirected edge set:
/// a_ij = 1/(1 + max(deg_i, deg_j)) on edges, a_ii = 1 - sum_{j != i} a_ij.
WeightedDigraph metropolis_weights(const std::vector<std::pair<int, int>>& edges,
                                   int n);

/// For a strongly connected graph, checks that the spectrum of (L + L^T)/2 is
/// nonnegative (>= -tol) with exactly one eigenvalue of magnitude <= tol.
/// Throws if g is not strongly connected.
bool laplacian_spectrum_check(const WeightedDigraph& g, double tol);

struct Epoch {
  double start;  // seconds (continuous) or step index (discrete)
  WeightedDigraph graph;
};

/// Piecewise-constant graph schedule. The epoch list covers [0, period) and is
/// replayed cyclically beyond it. window is the joint-connectivity interval
/// length M; dwell is the minimum epoch length d_w (continuous family only).
class GraphSchedule {
 public:
  GraphSchedule(std::vector<Epoch> epochs, double period, double window,
                double dwell = 0.0);

  const std::vector<Epoch>& epochs() const { return epochs_; }
  double period() const { return period_; }
  double window() const { return window_; }
  double dwell() const { return dwell_; }
  GraphFamily family() const { return epochs_.front().graph.family(); }
  int agent_count() const { return epochs_.front().graph.size(); }

  /// Epoch index active at time t (t >= 0; cyclic beyond one period).
  int epoch_index_at(double t) const;
  const WeightedDigraph& graph_at(double t) const;

  /// First epoch boundary strictly greater than t (cyclic).
  double next_boundary_after(double t) const;

  /// Length of epoch k within one period.
  double epoch_length(int k) const;

 private:
  std::vector<Epoch> epochs_;
  double period_;
  double window_;
  double dwell_;
};

/// Union of all epoch graphs active during [start, end): an edge is present if
/// present in any contributing epoch, with the maximum weight over epochs.
/// The result uses the continuous convention (no self-loops); it exists for
/// connectivity tests only. Throws on an empty or negative window.
WeightedDigraph union_graph(const GraphSchedule& schedule, double start,
                            double end);

struct ValidationIssue {
  std::string assumption;  // e.g. "Assumption 6 (doubly stochastic)"
  std::string message;
  std::string formatted() const { return assumption + ": " + message; }
};

struct WindowCheck {
  double start;
  double end;
  bool strongly_connected;
};

struct ValidationReport {
  std::vector<WindowCheck> windows;
  std::vector<ValidationIssue> issues;
  bool pass() const { return issues.empty(); }
  std::string summary() const;
};

/// Checks the schedule against the graph-side assumptions for the requested
/// algorithm family: balanced epochs and dwell time for continuous, doubly
/// stochastic epochs for discrete, and strong connectivity of the union over
/// each joint-connectivity window for both. Violations become report entries,
/// never exceptions.
ValidationReport validate_schedule(const GraphSchedule& schedule,
                                   GraphFamily family);

}  // namespace distopt
