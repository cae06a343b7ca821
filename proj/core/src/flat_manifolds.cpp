// Euclidean R^m and the circle S^1 (angles with wrap-around arithmetic).
#include <algorithm>
#include <cmath>
#include <cstring>

#include "manifolds_internal.hpp"

namespace manitv::detail {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Signed wrap into [-pi, pi).
double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w >= kPi) w -= 2.0 * kPi;
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------
// Euclidean(m)

EuclideanManifold::EuclideanManifold(int m)
    : Manifold(ManifoldDescriptor::euclidean(m)) {}

void EuclideanManifold::validate_point(std::span<const double> x) const {
  if (x.size() != static_cast<size_t>(ambient()))
    throw ValidationError("euclidean point has wrong size");
  for (double c : x)
    if (!std::isfinite(c)) throw ValidationError("euclidean point has non-finite entry");
}

double EuclideanManifold::dist(std::span<const double> x,
                               std::span<const double> y) const {
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

void EuclideanManifold::exp(std::span<const double> x, std::span<const double> v,
                            std::span<double> out) const {
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] + v[i];
}

void EuclideanManifold::log(std::span<const double> x, std::span<const double> y,
                            std::span<double> out) const {
  for (size_t i = 0; i < x.size(); ++i) out[i] = y[i] - x[i];
}

void EuclideanManifold::geodesic(std::span<const double> x, std::span<const double> y,
                                 double t, std::span<double> out) const {
  if (t == 0.0 || bitwise_equal(x, y)) {
    if (out.data() != x.data()) std::memcpy(out.data(), x.data(), x.size() * sizeof(double));
    return;
  }
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] + t * (y[i] - x[i]);
}

void EuclideanManifold::transport(std::span<const double>, std::span<const double>,
                                  std::span<const double> v, std::span<double> out) const {
  if (out.data() != v.data()) std::memcpy(out.data(), v.data(), v.size() * sizeof(double));
}

double EuclideanManifold::inner(std::span<const double>, std::span<const double> u,
                                std::span<const double> v) const {
  double s = 0.0;
  for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

void EuclideanManifold::tangent_basis(std::span<const double>,
                                      std::vector<double>& basis) const {
  const int m = ambient();
  basis.assign(static_cast<size_t>(m) * m, 0.0);
  for (int k = 0; k < m; ++k) basis[static_cast<size_t>(k) * m + k] = 1.0;
}

void EuclideanManifold::midpoint_frame(std::span<const double> x,
                                       std::span<const double> z,
                                       MidpointFrame& out) const {
  if (dist(x, z) <= kDegenerateT)
    throw GeometryDomainError("midpoint frame: degenerate geodesic on " +
                              descriptor().to_string());
  tangent_basis(x, out.vectors);
  out.count = dim();
  out.weights.assign(static_cast<size_t>(dim()), 0.5);
}

void EuclideanManifold::midpoint_diff_adjoint_limit(std::span<const double>,
                                                    std::span<const double>,
                                                    std::span<const double> v,
                                                    std::span<double> out) const {
  for (size_t i = 0; i < v.size(); ++i) out[i] = 0.5 * v[i];
}

// ---------------------------------------------------------------------------
// Circle S^1

CircleManifold::CircleManifold() : Manifold(ManifoldDescriptor::circle()) {}

void CircleManifold::validate_point(std::span<const double> x) const {
  if (x.size() != 1) throw ValidationError("circle point has wrong size");
  if (!std::isfinite(x[0]) || x[0] < -kPi || x[0] >= kPi)
    throw ValidationError("circle angle must lie in [-pi, pi)");
}

double CircleManifold::dist(std::span<const double> x, std::span<const double> y) const {
  return std::abs(wrap_angle(x[0] - y[0]));
}

void CircleManifold::exp(std::span<const double> x, std::span<const double> v,
                         std::span<double> out) const {
  out[0] = v[0] == 0.0 ? x[0] : wrap_angle(x[0] + v[0]);
}

void CircleManifold::log(std::span<const double> x, std::span<const double> y,
                         std::span<double> out) const {
  if (x[0] == y[0]) {
    out[0] = 0.0;
    return;
  }
  const double delta = wrap_angle(y[0] - x[0]);
  if (std::abs(delta) > kPi - kCutLocusTol)
    throw GeometryDomainError("circle log: points are antipodal (cut locus)");
  out[0] = delta;
}

void CircleManifold::geodesic(std::span<const double> x, std::span<const double> y,
                              double t, std::span<double> out) const {
  if (t == 0.0 || x[0] == y[0]) {
    out[0] = x[0];
    return;
  }
  double delta;
  log(x, y, {&delta, 1});
  out[0] = wrap_angle(x[0] + t * delta);
}

void CircleManifold::transport(std::span<const double>, std::span<const double>,
                               std::span<const double> v, std::span<double> out) const {
  out[0] = v[0];
}

double CircleManifold::inner(std::span<const double>, std::span<const double> u,
                             std::span<const double> v) const {
  return u[0] * v[0];
}

void CircleManifold::tangent_basis(std::span<const double>,
                                   std::vector<double>& basis) const {
  basis.assign(1, 1.0);
}

void CircleManifold::midpoint_frame(std::span<const double> x, std::span<const double> z,
                                    MidpointFrame& out) const {
  const double t = dist(x, z);
  if (t <= kDegenerateT)
    throw GeometryDomainError("midpoint frame: degenerate geodesic on circle");
  if (t > kPi - kCutLocusTol)
    throw GeometryDomainError("midpoint frame: antipodal pair on circle");
  const double delta = wrap_angle(z[0] - x[0]);
  out.count = 1;
  out.vectors.assign(1, delta >= 0.0 ? 1.0 : -1.0);
  out.weights.assign(1, 0.5);
}

void CircleManifold::midpoint_diff_adjoint_limit(std::span<const double>,
                                                 std::span<const double>,
                                                 std::span<const double> v,
                                                 std::span<double> out) const {
  out[0] = 0.5 * v[0];
}

}  // namespace manitv::detail
