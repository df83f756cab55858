#include "distopt/objective.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace distopt {

struct Objective::Impl {
  virtual ~Impl() = default;
  virtual Kind kind() const = 0;
  virtual int dim() const = 0;
  virtual double eval(const double* x) const = 0;
  virtual void grad(const double* x, double* g) const = 0;
};

namespace {

double ipow(double base, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

struct ShiftedPowerImpl final : Objective::Impl {
  Vector shift;
  int p;
  ShiftedPowerImpl(Vector c, int exponent) : shift(std::move(c)), p(exponent) {}
  Objective::Kind kind() const override { return Objective::Kind::ShiftedPower; }
  int dim() const override { return static_cast<int>(shift.size()); }
  double eval(const double* x) const override {
    double s = 0.0;
    for (int c = 0; c < dim(); ++c) s += ipow(x[c] + shift[c], p);
    return s / p;
  }
  void grad(const double* x, double* g) const override {
    for (int c = 0; c < dim(); ++c) g[c] = ipow(x[c] + shift[c], p - 1);
  }
};

struct QuadraticImpl final : Objective::Impl {
  Matrix Q;
  Vector q;
  double r;
  QuadraticImpl(Matrix Q_, Vector q_, double r_)
      : Q(std::move(Q_)), q(std::move(q_)), r(r_) {}
  Objective::Kind kind() const override { return Objective::Kind::Quadratic; }
  int dim() const override { return static_cast<int>(q.size()); }
  double eval(const double* x) const override {
    Eigen::Map<const Vector> xv(x, dim());
    return 0.5 * xv.dot(Q * xv) + q.dot(xv) + r;
  }
  void grad(const double* x, double* g) const override {
    Eigen::Map<const Vector> xv(x, dim());
    Eigen::Map<Vector> gv(g, dim());
    gv.noalias() = Q * xv;
    gv += q;
  }
};

struct SumImpl final : Objective::Impl {
  std::vector<Objective> terms;
  explicit SumImpl(std::vector<Objective> t) : terms(std::move(t)) {}
  Objective::Kind kind() const override { return Objective::Kind::Sum; }
  int dim() const override { return terms.front().dim(); }
  double eval(const double* x) const override {
    double s = 0.0;
    for (const Objective& f : terms) s += f.eval_raw(x);
    return s;
  }
  void grad(const double* x, double* g) const override {
    const int m = dim();
    std::fill(g, g + m, 0.0);
    Vector tmp(m);
    for (const Objective& f : terms) {
      f.grad_to(x, tmp.data());
      for (int c = 0; c < m; ++c) g[c] += tmp[c];
    }
  }
};

}  // namespace

Objective Objective::shifted_power(Vector shift, int exponent) {
  if (shift.size() < 1) throw Error("shifted_power: empty shift");
  if (exponent < 2 || exponent % 2 != 0)
    throw Error("shifted_power: exponent must be even and >= 2");
  if (!shift.allFinite()) throw Error("shifted_power: shift must be finite");
  return Objective(std::make_shared<ShiftedPowerImpl>(std::move(shift), exponent));
}

Objective Objective::quadratic(Matrix Q, Vector q, double r) {
  if (Q.rows() != Q.cols() || Q.rows() != q.size() || Q.rows() < 1)
    throw DimensionError("quadratic: shape mismatch");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, Q.cwiseAbs().maxCoeff()))
    throw Error("quadratic: Q must be symmetric");
  // Positive definiteness keeps the minimizer set a bounded singleton.
  Eigen::LLT<Matrix> llt(Q);
  if (llt.info() != Eigen::Success)
    throw Error("quadratic: Q must be positive definite");
  return Objective(std::make_shared<QuadraticImpl>(std::move(Q), std::move(q), r));
}

Objective Objective::sum(std::vector<Objective> terms) {
  if (terms.empty()) throw Error("sum: needs at least one term");
  const int m = terms.front().dim();
  for (const Objective& f : terms) {
    if (f.dim() != m) throw DimensionError("sum: term dimensions differ");
  }
  return Objective(std::make_shared<SumImpl>(std::move(terms)));
}

Objective::Kind Objective::kind() const { return impl_->kind(); }
int Objective::dim() const { return impl_->dim(); }

double Objective::eval(const Vector& x) const {
  if (x.size() != dim()) throw DimensionError("eval: dimension mismatch");
  return impl_->eval(x.data());
}

Vector Objective::grad(const Vector& x) const {
  if (x.size() != dim()) throw DimensionError("grad: dimension mismatch");
  Vector g(dim());
  impl_->grad(x.data(), g.data());
  return g;
}

double Objective::grad_check(const Vector& x, double h) const {
  if (!(h > 0.0)) throw Error("grad_check: h must be positive");
  const Vector g = grad(x);
  Vector xp = x, xm = x;
  double worst = 0.0;
  for (int c = 0; c < dim(); ++c) {
    xp[c] = x[c] + h;
    xm[c] = x[c] - h;
    const double fd = (eval(xp) - eval(xm)) / (2.0 * h);
    xp[c] = x[c];
    xm[c] = x[c];
    worst = std::max(worst, std::abs(fd - g[c]) / std::max(1.0, std::abs(g[c])));
  }
  return worst;
}

double Objective::eval_raw(const double* x) const { return impl_->eval(x); }
void Objective::grad_to(const double* x, double* g) const { impl_->grad(x, g); }

namespace {
template <typename T>
const T& as(const std::shared_ptr<const Objective::Impl>& impl, const char* what) {
  const T* p = dynamic_cast<const T*>(impl.get());
  if (!p) throw Error(std::string("objective accessor mismatch: ") + what);
  return *p;
}

// Reduces an objective to (Q, q) when it is a quadratic or a degree-2 shifted
// power; returns false for higher powers.
bool quadratic_form(const Objective& f, Matrix& Q, Vector& q) {
  switch (f.kind()) {
    case Objective::Kind::Quadratic:
      Q = f.Q();
      q = f.q();
      return true;
    case Objective::Kind::ShiftedPower:
      if (f.exponent() != 2) return false;
      Q = Matrix::Identity(f.dim(), f.dim());
      q = f.shift();
      return true;
    case Objective::Kind::Sum: {
      Q = Matrix::Zero(f.dim(), f.dim());
      q = Vector::Zero(f.dim());
      Matrix Qt;
      Vector qt;
      for (const Objective& t : f.terms()) {
        if (!quadratic_form(t, Qt, qt)) return false;
        Q += Qt;
        q += qt;
      }
      return true;
    }
  }
  return false;
}
}  // namespace

const Vector& Objective::shift() const { return as<ShiftedPowerImpl>(impl_, "shift").shift; }
int Objective::exponent() const { return as<ShiftedPowerImpl>(impl_, "exponent").p; }
const Matrix& Objective::Q() const { return as<QuadraticImpl>(impl_, "Q").Q; }
const Vector& Objective::q() const { return as<QuadraticImpl>(impl_, "q").q; }
double Objective::r() const { return as<QuadraticImpl>(impl_, "r").r; }
const std::vector<Objective>& Objective::terms() const {
  return as<SumImpl>(impl_, "terms").terms;
}

Objective::MinimizerBall Objective::minimizer_ball() const {
  if (kind() == Kind::ShiftedPower) return {-shift(), 0.0};
  Matrix Q;
  Vector q;
  if (!quadratic_form(*this, Q, q))
    throw Error("minimizer_ball: no closed form for this objective structure");
  Eigen::LLT<Matrix> llt(Q);
  if (llt.info() != Eigen::Success)
    throw Error("minimizer_ball: combined quadratic is not positive definite");
  return {llt.solve(-q), 0.0};
}

}  // namespace distopt
