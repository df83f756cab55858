#include "distopt/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace distopt {

struct ConvexSet::Impl {
  virtual ~Impl() = default;
  virtual Kind kind() const = 0;
  virtual int dim() const = 0;
  virtual void project(const double* y, double* out) const = 0;
  virtual double distance(const double* y) const = 0;
};

namespace {

double sq_norm(const double* a, const double* b, int m) {
  double s = 0.0;
  for (int c = 0; c < m; ++c) {
    const double d = a[c] - b[c];
    s += d * d;
  }
  return s;
}

struct BallImpl final : ConvexSet::Impl {
  Vector center;
  double radius;
  BallImpl(Vector c, double r) : center(std::move(c)), radius(r) {}
  ConvexSet::Kind kind() const override { return ConvexSet::Kind::Ball; }
  int dim() const override { return static_cast<int>(center.size()); }
  void project(const double* y, double* out) const override {
    const int m = dim();
    const double d = std::sqrt(sq_norm(y, center.data(), m));
    if (d <= radius) {  // includes y == center
      std::copy(y, y + m, out);
      return;
    }
    const double s = radius / d;
    for (int c = 0; c < m; ++c) out[c] = center[c] + s * (y[c] - center[c]);
  }
  double distance(const double* y) const override {
    const double d = std::sqrt(sq_norm(y, center.data(), dim()));
    return std::max(0.0, d - radius);
  }
};

struct BoxImpl final : ConvexSet::Impl {
  Vector lower, upper;
  BoxImpl(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {}
  ConvexSet::Kind kind() const override { return ConvexSet::Kind::Box; }
  int dim() const override { return static_cast<int>(lower.size()); }
  void project(const double* y, double* out) const override {
    for (int c = 0; c < dim(); ++c)
      out[c] = std::min(std::max(y[c], lower[c]), upper[c]);
  }
  double distance(const double* y) const override {
    double s = 0.0;
    for (int c = 0; c < dim(); ++c) {
      const double p = std::min(std::max(y[c], lower[c]), upper[c]);
      const double d = y[c] - p;
      s += d * d;
    }
    return std::sqrt(s);
  }
};

struct HalfspaceImpl final : ConvexSet::Impl {
  Vector normal;
  double offset;
  double norm_sq;
  HalfspaceImpl(Vector a, double b)
      : normal(std::move(a)), offset(b), norm_sq(normal.squaredNorm()) {}
  ConvexSet::Kind kind() const override { return ConvexSet::Kind::Halfspace; }
  int dim() const override { return static_cast<int>(normal.size()); }
  void project(const double* y, double* out) const override {
    const int m = dim();
    double dot = 0.0;
    for (int c = 0; c < m; ++c) dot += normal[c] * y[c];
    if (dot <= offset) {
      std::copy(y, y + m, out);
      return;
    }
    const double s = (dot - offset) / norm_sq;
    for (int c = 0; c < m; ++c) out[c] = y[c] - s * normal[c];
  }
  double distance(const double* y) const override {
    double dot = 0.0;
    for (int c = 0; c < dim(); ++c) dot += normal[c] * y[c];
    return std::max(0.0, (dot - offset) / std::sqrt(norm_sq));
  }
};

struct IntersectionImpl final : ConvexSet::Impl {
  std::vector<ConvexSet> members;
  double tol;
  int max_iter;
  IntersectionImpl(std::vector<ConvexSet> m, double t, int it)
      : members(std::move(m)), tol(t), max_iter(it) {}
  ConvexSet::Kind kind() const override { return ConvexSet::Kind::Intersection; }
  int dim() const override { return members.front().dim(); }
  void project(const double* y, double* out) const override {
    Vector yy = Eigen::Map<const Vector>(y, dim());
    Vector p = dykstra(members, yy, tol, max_iter);
    std::copy(p.data(), p.data() + dim(), out);
  }
  double distance(const double* y) const override {
    Vector out(dim());
    project(y, out.data());
    return std::sqrt(sq_norm(y, out.data(), dim()));
  }
};

}  // namespace

ConvexSet ConvexSet::ball(Vector center, double radius) {
  if (!(radius > 0.0)) throw Error("ball: radius must be positive");
  if (center.size() < 1) throw Error("ball: empty center");
  return ConvexSet(std::make_shared<BallImpl>(std::move(center), radius));
}

ConvexSet ConvexSet::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size() || lower.size() < 1)
    throw Error("box: bound dimensions mismatch");
  for (int c = 0; c < lower.size(); ++c) {
    if (std::isnan(lower[c]) || std::isnan(upper[c]) || !(lower[c] <= upper[c]))
      throw Error("box: requires lower <= upper per coordinate");
  }
  return ConvexSet(std::make_shared<BoxImpl>(std::move(lower), std::move(upper)));
}

ConvexSet ConvexSet::halfspace(Vector normal, double offset) {
  if (normal.size() < 1 || normal.norm() == 0.0 || !normal.allFinite())
    throw Error("halfspace: normal must be nonzero and finite");
  if (!std::isfinite(offset)) throw Error("halfspace: offset must be finite");
  return ConvexSet(std::make_shared<HalfspaceImpl>(std::move(normal), offset));
}

ConvexSet ConvexSet::intersection(std::vector<ConvexSet> members, double tol,
                                  int max_iter) {
  if (members.empty()) throw Error("intersection: needs at least one member");
  if (!(tol > 0.0) || max_iter < 1)
    throw Error("intersection: tol must be positive and max_iter >= 1");
  std::vector<ConvexSet> flat;
  for (ConvexSet& s : members) {
    if (s.kind() == Kind::Intersection) {
      for (const ConvexSet& inner : s.members()) flat.push_back(inner);
    } else {
      flat.push_back(std::move(s));
    }
  }
  const int m = flat.front().dim();
  for (const ConvexSet& s : flat) {
    if (s.dim() != m) throw DimensionError("intersection: member dimensions differ");
  }
  return ConvexSet(std::make_shared<IntersectionImpl>(std::move(flat), tol, max_iter));
}

ConvexSet ConvexSet::whole_space(int dim) {
  const double inf = std::numeric_limits<double>::infinity();
  return box(Vector::Constant(dim, -inf), Vector::Constant(dim, inf));
}

ConvexSet::Kind ConvexSet::kind() const { return impl_->kind(); }
int ConvexSet::dim() const { return impl_->dim(); }

Vector ConvexSet::project(const Vector& y) const {
  if (y.size() != dim()) throw DimensionError("project: dimension mismatch");
  Vector out(dim());
  impl_->project(y.data(), out.data());
  return out;
}

double ConvexSet::distance(const Vector& y) const {
  if (y.size() != dim()) throw DimensionError("distance: dimension mismatch");
  return impl_->distance(y.data());
}

void ConvexSet::project_to(const double* y, double* out) const {
  impl_->project(y, out);
}

double ConvexSet::distance_to(const double* y) const {
  return impl_->distance(y);
}

namespace {
template <typename T>
const T& as(const std::shared_ptr<const ConvexSet::Impl>& impl,
            const char* what) {
  const T* p = dynamic_cast<const T*>(impl.get());
  if (!p) throw Error(std::string("convex set accessor mismatch: ") + what);
  return *p;
}
}  // namespace

const Vector& ConvexSet::center() const { return as<BallImpl>(impl_, "center").center; }
double ConvexSet::radius() const { return as<BallImpl>(impl_, "radius").radius; }
const Vector& ConvexSet::lower() const { return as<BoxImpl>(impl_, "lower").lower; }
const Vector& ConvexSet::upper() const { return as<BoxImpl>(impl_, "upper").upper; }
const Vector& ConvexSet::normal() const { return as<HalfspaceImpl>(impl_, "normal").normal; }
double ConvexSet::offset() const { return as<HalfspaceImpl>(impl_, "offset").offset; }
const std::vector<ConvexSet>& ConvexSet::members() const {
  return as<IntersectionImpl>(impl_, "members").members;
}
double ConvexSet::tol() const { return as<IntersectionImpl>(impl_, "tol").tol; }
int ConvexSet::max_iter() const { return as<IntersectionImpl>(impl_, "max_iter").max_iter; }

Vector dykstra(const std::vector<ConvexSet>& sets, const Vector& y, double tol,
               int max_iter) {
  if (sets.empty()) throw Error("dykstra: needs at least one set");
  const int m = static_cast<int>(y.size());
  for (const ConvexSet& s : sets) {
    if (s.dim() != m) throw DimensionError("dykstra: dimension mismatch");
  }
  const size_t r = sets.size();
  Vector x = y;
  Vector w(m), z(m), x_prev(m);
  std::vector<Vector> corrections(r, Vector::Zero(m));
  std::vector<Vector> prev_corrections(r, Vector::Zero(m));
  double residual = std::numeric_limits<double>::infinity();
  for (int cycle = 0; cycle < max_iter; ++cycle) {
    x_prev = x;
    double correction_change_sq = 0.0;
    for (size_t i = 0; i < r; ++i) {
      w = x + corrections[i];
      sets[i].project_to(w.data(), z.data());
      prev_corrections[i] = corrections[i];
      corrections[i] = w - z;
      correction_change_sq += (corrections[i] - prev_corrections[i]).squaredNorm();
      x = z;
    }
    residual = 0.0;
    for (size_t i = 0; i < r; ++i)
      residual = std::max(residual, sets[i].distance_to(x.data()));
    if (r == 1) return x;  // one projection is already exact
    // The iterate can stall for a cycle while the corrections still move
    // (typical at polyhedral corners), so the corrections must settle too
    // before the point counts as converged.
    if (residual <= tol && (x - x_prev).norm() <= tol &&
        std::sqrt(correction_change_sq) <= tol)
      return x;
  }
  throw DykstraError("dykstra: no convergence within max_iter cycles", x, residual);
}

}  // namespace distopt
