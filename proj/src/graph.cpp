#include "distopt/graph.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace distopt {

namespace {

constexpr double kCheckTol = 1e-9;  // default balance / stochasticity tolerance

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

WeightedDigraph::WeightedDigraph(GraphFamily family, Matrix weights, double eta)
    : family_(family), weights_(std::move(weights)), eta_(eta) {
  if (weights_.rows() != weights_.cols() || weights_.rows() < 1)
    throw Error("graph: weight matrix must be square and nonempty");
  if (!(eta_ > 0.0)) throw Error("graph: eta must be positive");
  const int n = size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double a = weights_(i, j);
      if (a < 0.0 || !std::isfinite(a))
        throw Error("graph: weights must be finite and nonnegative");
      if (a != 0.0 && a < eta_ - 1e-15)
        throw Error("graph: nonzero weight below eta");
    }
    if (family_ == GraphFamily::Continuous && weights_(i, i) != 0.0)
      throw Error("graph: continuous convention requires a zero diagonal");
    if (family_ == GraphFamily::Discrete && weights_(i, i) < eta_ - 1e-15)
      throw Error("graph: discrete convention requires a_ii >= eta");
  }
}

WeightedDigraph WeightedDigraph::continuous(Matrix weights, double eta) {
  return WeightedDigraph(GraphFamily::Continuous, std::move(weights), eta);
}

WeightedDigraph WeightedDigraph::discrete(Matrix weights, double eta) {
  return WeightedDigraph(GraphFamily::Discrete, std::move(weights), eta);
}

Matrix WeightedDigraph::laplacian() const {
  const int n = size();
  Matrix L = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double deg = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      L(i, j) = -weights_(i, j);
      deg += weights_(i, j);
    }
    L(i, i) = deg;
  }
  return L;
}

bool WeightedDigraph::is_balanced(double tol) const {
  if (tol < 0.0) throw Error("is_balanced: tol must be nonnegative");
  const int n = size();
  for (int i = 0; i < n; ++i) {
    if (std::abs(weights_.row(i).sum() - weights_.col(i).sum()) > tol)
      return false;
  }
  return true;
}

bool WeightedDigraph::is_doubly_stochastic(double tol) const {
  if (tol < 0.0) throw Error("is_doubly_stochastic: tol must be nonnegative");
  const int n = size();
  for (int i = 0; i < n; ++i) {
    if (weights_(i, i) < eta_ - 1e-15) return false;
    if (std::abs(weights_.row(i).sum() - 1.0) > tol) return false;
    if (std::abs(weights_.col(i).sum() - 1.0) > tol) return false;
  }
  return true;
}

bool WeightedDigraph::is_strongly_connected() const {
  // Kosaraju on the boolean off-diagonal adjacency: one forward and one
  // reverse reachability pass from node 0.
  const int n = size();
  auto reachable_from_zero = [&](bool reverse) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        if (v == u || seen[v]) continue;
        // edge u -> v means v hears u: a_vu != 0 (forward), a_uv (reverse)
        const double a = reverse ? weights_(u, v) : weights_(v, u);
        if (a != 0.0) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return reachable_from_zero(false) && reachable_from_zero(true);
}

std::vector<std::pair<int, double>> WeightedDigraph::in_neighbors(int i) const {
  std::vector<std::pair<int, double>> out;
  for (int j = 0; j < size(); ++j) {
    if (j != i && weights_(i, j) != 0.0) out.emplace_back(j, weights_(i, j));
  }
  return out;
}

WeightedDigraph graph_from_undirected_edges(
    int n, const std::vector<std::pair<int, int>>& edges, double weight,
    GraphFamily family) {
  if (!(weight > 0.0)) throw Error("graph: edge weight must be positive");
  Matrix w = Matrix::Zero(n, n);
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b)
      throw Error("graph: invalid undirected edge");
    w(a, b) = weight;
    w(b, a) = weight;
  }
  if (family == GraphFamily::Discrete) {
    for (int i = 0; i < n; ++i) w(i, i) = weight;
  }
  return WeightedDigraph(family, std::move(w), weight);
}

WeightedDigraph ring_graph(int n, double weight, GraphFamily family) {
  if (n < 3) throw Error("ring_graph: need at least 3 nodes");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return graph_from_undirected_edges(n, edges, weight, family);
}

WeightedDigraph path_graph(int n, double weight, GraphFamily family) {
  if (n < 2) throw Error("path_graph: need at least 2 nodes");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return graph_from_undirected_edges(n, edges, weight, family);
}

WeightedDigraph complete_graph(int n, double weight, GraphFamily family) {
  if (n < 2) throw Error("complete_graph: need at least 2 nodes");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return graph_from_undirected_edges(n, edges, weight, family);
}

WeightedDigraph metropolis_weights(const std::vector<std::pair<int, int>>& edges,
                                   int n) {
  if (n < 1) throw Error("metropolis_weights: need at least 1 node");
  std::set<std::pair<int, int>> canon;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b)
      throw Error("metropolis_weights: invalid undirected edge");
    canon.insert({std::min(a, b), std::max(a, b)});
  }
  std::vector<int> deg(n, 0);
  for (const auto& [a, b] : canon) {
    ++deg[a];
    ++deg[b];
  }
  Matrix w = Matrix::Zero(n, n);
  for (const auto& [a, b] : canon) {
    const double x = 1.0 / (1.0 + std::max(deg[a], deg[b]));
    w(a, b) = x;
    w(b, a) = x;
  }
  double eta = 1.0;
  for (int i = 0; i < n; ++i) {
    w(i, i) = 1.0 - (w.row(i).sum() - w(i, i));
    for (int j = 0; j < n; ++j) {
      if (w(i, j) > 0.0) eta = std::min(eta, w(i, j));
    }
  }
  return WeightedDigraph::discrete(std::move(w), eta);
}

bool laplacian_spectrum_check(const WeightedDigraph& g, double tol) {
  if (!g.is_strongly_connected())
    throw Error("laplacian_spectrum_check: graph is not strongly connected");
  const Matrix L = g.laplacian();
  const Matrix sym = 0.5 * (L + L.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success)
    throw Error("laplacian_spectrum_check: eigensolver failed");
  int near_zero = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam < -tol) return false;
    if (std::abs(lam) <= tol) ++near_zero;
  }
  return near_zero == 1;
}

GraphSchedule::GraphSchedule(std::vector<Epoch> epochs, double period,
                             double window, double dwell)
    : epochs_(std::move(epochs)), period_(period), window_(window), dwell_(dwell) {
  if (epochs_.empty()) throw Error("schedule: at least one epoch required");
  if (epochs_.front().start != 0.0) throw Error("schedule: first epoch must start at 0");
  for (size_t k = 1; k < epochs_.size(); ++k) {
    if (!(epochs_[k].start > epochs_[k - 1].start))
      throw Error("schedule: epoch starts must strictly increase");
  }
  if (!(period_ > epochs_.back().start))
    throw Error("schedule: period must exceed the last epoch start");
  if (!(window_ > 0.0)) throw Error("schedule: window must be positive");
  if (dwell_ < 0.0) throw Error("schedule: dwell must be nonnegative");
  const int n = epochs_.front().graph.size();
  const GraphFamily fam = epochs_.front().graph.family();
  for (const Epoch& e : epochs_) {
    if (e.graph.size() != n) throw Error("schedule: epochs must share one agent count");
    if (e.graph.family() != fam) throw Error("schedule: epochs must share one family");
  }
}

int GraphSchedule::epoch_index_at(double t) const {
  if (t < 0.0) throw Error("schedule: negative time");
  double tau = std::fmod(t, period_);
  if (tau < 0.0) tau += period_;
  int lo = 0;
  for (size_t k = 1; k < epochs_.size(); ++k) {
    if (epochs_[k].start <= tau) lo = static_cast<int>(k);
  }
  return lo;
}

const WeightedDigraph& GraphSchedule::graph_at(double t) const {
  return epochs_[epoch_index_at(t)].graph;
}

double GraphSchedule::epoch_length(int k) const {
  const size_t i = static_cast<size_t>(k);
  if (i + 1 < epochs_.size()) return epochs_[i + 1].start - epochs_[i].start;
  return period_ - epochs_[i].start;
}

double GraphSchedule::next_boundary_after(double t) const {
  if (t < 0.0) throw Error("schedule: negative time");
  const double cycles = std::floor(t / period_);
  const double tau = t - cycles * period_;
  for (const Epoch& e : epochs_) {
    if (e.start > tau) return cycles * period_ + e.start;
  }
  return (cycles + 1.0) * period_;
}

WeightedDigraph union_graph(const GraphSchedule& schedule, double start,
                            double end) {
  if (start < 0.0 || !(end > start))
    throw Error("union_graph: window outside the schedule range");
  const int n = schedule.agent_count();
  Matrix w = Matrix::Zero(n, n);
  double eta = 1.0;
  auto absorb = [&](const WeightedDigraph& g) {
    eta = std::min(eta, g.eta());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) w(i, j) = std::max(w(i, j), g.weight(i, j));
  };
  if (end - start >= schedule.period()) {
    for (const Epoch& e : schedule.epochs()) absorb(e.graph);
  } else {
    double t = start;
    while (t < end) {
      absorb(schedule.graph_at(t));
      const double next = schedule.next_boundary_after(t);
      if (!(next > t)) break;  // rounding guard
      t = next;
    }
  }
  return WeightedDigraph::continuous(std::move(w), eta);
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << (pass() ? "pass" : "FAIL") << " (" << windows.size() << " window"
     << (windows.size() == 1 ? "" : "s") << " checked";
  if (!issues.empty()) os << ", " << issues.size() << " issue"
                          << (issues.size() == 1 ? "" : "s");
  os << ")";
  for (const ValidationIssue& issue : issues) os << "\n  " << issue.formatted();
  return os.str();
}

ValidationReport validate_schedule(const GraphSchedule& schedule,
                                   GraphFamily family) {
  ValidationReport report;
  auto issue = [&](const std::string& assumption, const std::string& msg) {
    report.issues.push_back({assumption, msg});
  };

  if (schedule.family() != family)
    issue("graph family", family == GraphFamily::Continuous
                              ? "continuous run requires zero-diagonal epoch graphs"
                              : "discrete run requires self-weighted epoch graphs");

  const auto& epochs = schedule.epochs();
  if (family == GraphFamily::Continuous) {
    if (!(schedule.dwell() > 0.0))
      issue("Assumption 4 (dwell time)", "dwell time d_w must be positive");
    if (!(schedule.window() > schedule.dwell()))
      issue("Assumption 5 (joint connectivity)",
            "window M must exceed the dwell time d_w");
    for (size_t k = 0; k < epochs.size(); ++k) {
      const double len = schedule.epoch_length(static_cast<int>(k));
      if (len < schedule.dwell() - 1e-12)
        issue("Assumption 4 (dwell time)",
              "epoch " + std::to_string(k) + " lasts " + fmt(len) +
                  ", shorter than d_w = " + fmt(schedule.dwell()));
      if (!epochs[k].graph.is_balanced(kCheckTol))
        issue("Assumption 3 (balanced graphs)",
              "epoch " + std::to_string(k) + " graph is not balanced");
    }
  } else {
    for (size_t k = 0; k < epochs.size(); ++k) {
      const WeightedDigraph& g = epochs[k].graph;
      const int n = g.size();
      const std::string where =
          epochs.size() > 1 ? "epoch " + std::to_string(k) + ": " : "";
      bool diag_bad = false;
      for (int i = 0; i < n && !diag_bad; ++i) {
        if (g.weight(i, i) < g.eta() - 1e-15) {
          issue("Assumption 6 (doubly stochastic)",
                where + "diagonal entry " + std::to_string(i + 1) + " is below eta");
          diag_bad = true;
        }
      }
      if (diag_bad) continue;
      // Report the worst-deviating line, so the defect is named by the sum
      // that is actually off rather than by a smaller compensating one.
      double row_dev = 0.0, col_dev = 0.0, row_sum = 0.0, col_sum = 0.0;
      int row_at = 0, col_at = 0;
      for (int i = 0; i < n; ++i) {
        const double rs = g.weights().row(i).sum();
        const double cs = g.weights().col(i).sum();
        if (std::abs(rs - 1.0) > row_dev) {
          row_dev = std::abs(rs - 1.0);
          row_sum = rs;
          row_at = i;
        }
        if (std::abs(cs - 1.0) > col_dev) {
          col_dev = std::abs(cs - 1.0);
          col_sum = cs;
          col_at = i;
        }
      }
      if (std::max(row_dev, col_dev) > kCheckTol) {
        if (col_dev > row_dev)
          issue("Assumption 6 (doubly stochastic)",
                where + "column " + std::to_string(col_at + 1) + " sums to " + fmt(col_sum));
        else
          issue("Assumption 6 (doubly stochastic)",
                where + "row " + std::to_string(row_at + 1) + " sums to " + fmt(row_sum));
      }
    }
  }

  // Joint connectivity of the witness windows [j M, (j+1) M). With a cyclic
  // schedule the alignment classes repeat once j*M hits a multiple of the
  // period, so the scan is capped.
  const std::string conn_name = family == GraphFamily::Continuous
                                    ? "Assumption 5 (joint connectivity)"
                                    : "Assumption 7 (joint connectivity)";
  const double M = schedule.window();
  const double P = schedule.period();
  int max_windows = 64;
  for (int j = 1; j <= max_windows; ++j) {
    const double r = std::fmod(j * M, P);
    if (r < 1e-12 * P || P - r < 1e-12 * P) {
      max_windows = j;
      break;
    }
  }
  for (int j = 0; j < max_windows; ++j) {
    const double a = j * M;
    const double b = a + M;
    const bool ok = union_graph(schedule, a, b).is_strongly_connected();
    report.windows.push_back({a, b, ok});
    if (!ok)
      issue(conn_name, "union over [" + fmt(a) + ", " + fmt(b) +
                           ") is not strongly connected");
  }
  return report;
}

}  // namespace distopt
