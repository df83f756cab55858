#pragma once

#include "distopt/types.hpp"

#include <memory>
#include <vector>

namespace distopt {

/// Thrown when the iterative intersection projector fails to reach its
/// tolerance within the iteration budget. Carries the last iterate and the
/// worst per-member distance at that iterate.
class DykstraError : public Error {
 public:
  DykstraError(const std::string& msg, Vector last_iterate, double residual)
      : Error(msg), last_iterate_(std::move(last_iterate)), residual_(residual) {}
  const Vector& last_iterate() const { return last_iterate_; }
  double residual() const { return residual_; }

 private:
  Vector last_iterate_;
  double residual_;
};

/// Closed convex set with a projection oracle. Ball, box and halfspace project
/// in closed form; an intersection projects with Dykstra's algorithm over its
/// members. Value type with immutable shared state.
class ConvexSet {
 public:
  enum class Kind { Ball, Box, Halfspace, Intersection };

  static ConvexSet ball(Vector center, double radius);
  /// Per-coordinate bounds; +-infinity marks an unconstrained side.
  static ConvexSet box(Vector lower, Vector upper);
  /// { x : normal . x <= offset }, normal != 0.
  static ConvexSet halfspace(Vector normal, double offset);
  /// Nested intersections are flattened into one member list.
  static ConvexSet intersection(std::vector<ConvexSet> members,
                                double tol = 1e-10, int max_iter = 10000);
  /// All of R^dim (a box with infinite bounds).
  static ConvexSet whole_space(int dim);

  Kind kind() const;
  int dim() const;

  Vector project(const Vector& y) const;
  double distance(const Vector& y) const;
  bool contains(const Vector& y, double tol) const { return distance(y) <= tol; }

  // Allocation-free kernels for the solver hot loops. Buffers hold dim()
  // doubles; in and out may alias.
  void project_to(const double* y, double* out) const;
  double distance_to(const double* y) const;

  // Variant accessors; throw on kind mismatch.
  const Vector& center() const;
  double radius() const;
  const Vector& lower() const;
  const Vector& upper() const;
  const Vector& normal() const;
  double offset() const;
  const std::vector<ConvexSet>& members() const;
  double tol() const;
  int max_iter() const;

  /// Identity of the underlying shared state (used to deduplicate sets that
  /// several agents share).
  bool same_impl(const ConvexSet& other) const { return impl_ == other.impl_; }

  struct Impl;

 private:
  explicit ConvexSet(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Dykstra's alternating projections onto the intersection of the given sets.
/// Unlike plain cyclic projections this converges to the true projection of y,
/// not merely a feasible point. Stops once every member distance and the
/// per-cycle change are below tol; throws DykstraError after max_iter cycles.
Vector dykstra(const std::vector<ConvexSet>& sets, const Vector& y, double tol,
               int max_iter);

}  // namespace distopt
