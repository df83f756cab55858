#pragma once

#include "distopt/types.hpp"

#include <memory>
#include <vector>

namespace distopt {

/// Differentiable convex local objective with an exact analytic gradient.
/// Every constructible variant has a nonempty bounded minimizer set: shifted
/// powers by construction, quadratics because the constructor requires a
/// positive definite Q, sums because each term is coercive.
class Objective {
 public:
  enum class Kind { ShiftedPower, Quadratic, Sum };

  /// f(x) = sum_l (1/p) (x_l + shift_l)^p with p even and >= 2.
  static Objective shifted_power(Vector shift, int exponent);
  /// f(x) = 1/2 x^T Q x + q^T x + r with Q symmetric positive definite.
  static Objective quadratic(Matrix Q, Vector q, double r);
  static Objective sum(std::vector<Objective> terms);

  Kind kind() const;
  int dim() const;

  double eval(const Vector& x) const;
  Vector grad(const Vector& x) const;

  /// Max per-coordinate deviation between the analytic gradient and a central
  /// finite difference with step h, measured relative to max(1, |component|).
  double grad_check(const Vector& x, double h) const;

  struct MinimizerBall {
    Vector center;
    double radius;
  };
  /// A ball certified to contain the minimizer set. Exact (radius 0) for
  /// shifted powers, quadratics and sums reducible to a quadratic; throws for
  /// sums involving higher powers, which have no closed form.
  MinimizerBall minimizer_ball() const;

  // Allocation-free kernels; buffers hold dim() doubles, no dimension checks.
  double eval_raw(const double* x) const;
  void grad_to(const double* x, double* g) const;

  // Variant accessors; throw on kind mismatch.
  const Vector& shift() const;
  int exponent() const;
  const Matrix& Q() const;
  const Vector& q() const;
  double r() const;
  const std::vector<Objective>& terms() const;

  struct Impl;

 private:
  explicit Objective(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace distopt
