// Unit sphere S^n embedded in R^{n+1}: closed-form geometry and the
// geodesic-aligned frame with its Jacobi midpoint weights.
#include "manitv/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "manifolds_internal.hpp"

namespace manitv::detail {

namespace {

constexpr double kPi = 3.14159265358979323846;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void normalize(std::span<double> a) {
  const double n = norm2(a);
  if (n > 0.0)
    for (auto& c : a) c /= n;
}

// Removes the component of a along the unit vector u.
void project_out(std::span<double> a, std::span<const double> u) {
  const double c = dot(a, u);
  for (size_t i = 0; i < a.size(); ++i) a[i] -= c * u[i];
}

}  // namespace

SphereManifold::SphereManifold(int n) : Manifold(ManifoldDescriptor::sphere(n)) {}

void SphereManifold::validate_point(std::span<const double> x) const {
  if (x.size() != static_cast<size_t>(ambient()))
    throw ValidationError("sphere point has wrong size");
  for (double c : x)
    if (!std::isfinite(c)) throw ValidationError("sphere point has non-finite entry");
  if (std::abs(norm2(x) - 1.0) > kPointTol)
    throw ValidationError("sphere point is not a unit vector");
}

void SphereManifold::validate_tangent(std::span<const double> x,
                                      std::span<const double> v) const {
  Manifold::validate_tangent(x, v);
  if (std::abs(dot(x, v)) > kPointTol)
    throw ValidationError("sphere tangent is not orthogonal to its base point");
}

double SphereManifold::dist(std::span<const double> x, std::span<const double> y) const {
  if (bitwise_equal(x, y)) return 0.0;
  return std::acos(std::clamp(dot(x, y), -1.0, 1.0));
}

void SphereManifold::exp(std::span<const double> x, std::span<const double> v,
                         std::span<double> out) const {
  const double theta = norm2(v);
  if (theta == 0.0) {
    if (out.data() != x.data()) std::memcpy(out.data(), x.data(), x.size() * sizeof(double));
    return;
  }
  const double c = std::cos(theta), s = std::sin(theta) / theta;
  for (size_t i = 0; i < x.size(); ++i) out[i] = c * x[i] + s * v[i];
  normalize(out);
}

void SphereManifold::log(std::span<const double> x, std::span<const double> y,
                         std::span<double> out) const {
  if (bitwise_equal(x, y)) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double xy = dot(x, y);
  // Tangential residual y - <x,y> x; its norm is sin(d), which conditions
  // the small-distance regime better than acos alone.
  for (size_t i = 0; i < x.size(); ++i) out[i] = y[i] - xy * x[i];
  const double pn = norm2(out);
  const double d = std::atan2(pn, xy);
  if (d > kPi - kCutLocusTol)
    throw GeometryDomainError("sphere log: antipodal pair (cut locus)");
  if (pn < 1e-15) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double scale = d / pn;
  for (auto& c : out) c *= scale;
}

void SphereManifold::geodesic(std::span<const double> x, std::span<const double> y,
                              double t, std::span<double> out) const {
  if (t == 0.0 || bitwise_equal(x, y)) {
    if (out.data() != x.data()) std::memcpy(out.data(), x.data(), x.size() * sizeof(double));
    return;
  }
  SmallBuf<64> buf;
  auto v = buf.get(ambient());
  log(x, y, v);
  for (auto& c : v) c *= t;
  exp(x, v, out);
}

void SphereManifold::transport(std::span<const double> x, std::span<const double> y,
                               std::span<const double> v, std::span<double> out) const {
  SmallBuf<64> buf;
  auto u = buf.get(ambient());
  log(x, y, u);
  const double d = norm2(u);
  if (d < 1e-15) {
    if (out.data() != v.data()) std::memcpy(out.data(), v.data(), v.size() * sizeof(double));
    return;
  }
  for (auto& c : u) c /= d;  // unit direction at x
  const double a = dot(v, u);
  const double cd = std::cos(d), sd = std::sin(d);
  // Direction rotates to the geodesic tangent at y; the orthogonal
  // complement is carried unchanged.
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = v[i] - a * u[i] + a * (cd * u[i] - sd * x[i]);
  project_out(out, y);
}

double SphereManifold::inner(std::span<const double>, std::span<const double> u,
                             std::span<const double> v) const {
  return dot(u, v);
}

void SphereManifold::tangent_basis(std::span<const double> x,
                                   std::vector<double>& basis) const {
  const int a = ambient();
  basis.assign(static_cast<size_t>(dim()) * a, 0.0);
  int filled = 0;
  for (int axis = 0; axis < a && filled < dim(); ++axis) {
    std::span<double> cand(basis.data() + static_cast<size_t>(filled) * a,
                           static_cast<size_t>(a));
    std::fill(cand.begin(), cand.end(), 0.0);
    cand[static_cast<size_t>(axis)] = 1.0;
    project_out(cand, x);
    for (int k = 0; k < filled; ++k) {
      std::span<const double> prev(basis.data() + static_cast<size_t>(k) * a,
                                   static_cast<size_t>(a));
      const double c = dot(cand, prev);
      for (int i = 0; i < a; ++i) cand[static_cast<size_t>(i)] -= c * prev[static_cast<size_t>(i)];
    }
    if (norm2(cand) > 1e-6) {
      normalize(cand);
      ++filled;
    }
  }
  if (filled != dim())
    throw GeometryDomainError("sphere tangent basis completion failed");
}

void SphereManifold::midpoint_frame(std::span<const double> x, std::span<const double> z,
                                    MidpointFrame& out) const {
  const double t = dist(x, z);
  if (t <= kDegenerateT)
    throw GeometryDomainError("midpoint frame: degenerate geodesic on sphere");
  if (t > kPi - kCutLocusTol)
    throw GeometryDomainError("midpoint frame: antipodal pair on sphere");

  const int a = ambient();
  const int n = dim();
  out.count = n;
  out.vectors.assign(static_cast<size_t>(n) * a, 0.0);
  out.weights.assign(static_cast<size_t>(n), std::sin(0.5 * t) / std::sin(t));
  out.weights[0] = 0.5;

  std::span<double> v0(out.vectors.data(), static_cast<size_t>(a));
  log(x, z, v0);
  for (auto& c : v0) c /= t;

  if (n == 2) {
    // Cross product completes the frame on S^2.
    std::span<double> v1(out.vectors.data() + a, static_cast<size_t>(a));
    v1[0] = x[1] * v0[2] - x[2] * v0[1];
    v1[1] = x[2] * v0[0] - x[0] * v0[2];
    v1[2] = x[0] * v0[1] - x[1] * v0[0];
    normalize(v1);
    return;
  }
  int filled = 1;
  for (int axis = 0; axis < a && filled < n; ++axis) {
    std::span<double> cand(out.vectors.data() + static_cast<size_t>(filled) * a,
                           static_cast<size_t>(a));
    std::fill(cand.begin(), cand.end(), 0.0);
    cand[static_cast<size_t>(axis)] = 1.0;
    project_out(cand, x);
    for (int k = 0; k < filled; ++k) {
      std::span<const double> prev(out.vectors.data() + static_cast<size_t>(k) * a,
                                   static_cast<size_t>(a));
      const double c = dot(cand, prev);
      for (int i = 0; i < a; ++i) cand[static_cast<size_t>(i)] -= c * prev[static_cast<size_t>(i)];
    }
    if (norm2(cand) > 1e-6) {
      normalize(cand);
      ++filled;
    }
  }
  if (filled != n)
    throw GeometryDomainError("sphere frame completion failed");
}

void SphereManifold::midpoint_diff_adjoint_limit(std::span<const double> x,
                                                 std::span<const double> z,
                                                 std::span<const double> v,
                                                 std::span<double> out) const {
  SmallBuf<64> ebuf, gbuf;
  auto e = ebuf.get(ambient());
  log(x, z, e);
  const double t = norm2(e);
  if (t <= kDegenerateT) {
    for (size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * v[i];
    return;
  }
  for (auto& c : e) c /= t;  // unit direction at x

  // Transport v from the midpoint back to x: the geodesic tangent at the
  // midpoint maps onto e, everything orthogonal is carried rigidly.
  const double ch = std::cos(0.5 * t), sh = std::sin(0.5 * t);
  auto g = gbuf.get(ambient());
  for (size_t i = 0; i < g.size(); ++i) g[i] = -sh * x[i] + ch * e[i];
  const double a = dot(v, g);
  // vt = v - a g + a e, then split along e with weight 1/2 and across with
  // the constant-curvature Jacobi weight sin(T/2)/sin(T).
  const double w_perp = 0.5 / ch;  // sin(T/2)/sin(T)
  for (size_t i = 0; i < out.size(); ++i) {
    const double vt = v[i] - a * g[i] + a * e[i];
    out[i] = vt;
  }
  project_out(out, x);
  const double along = dot(out, e);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = 0.5 * along * e[i] + w_perp * (out[i] - along * e[i]);
}

}  // namespace manitv::detail

namespace manitv {

std::pair<SphereFrame, std::vector<double>> sphere_midpoint_weights(
    const Manifold& sphere, const Point& x, const Point& z) {
  if (sphere.descriptor().kind() != ManifoldKind::Sphere)
    throw ValidationError("sphere_midpoint_weights needs a sphere manifold");
  sphere.validate_point(x.coords);
  sphere.validate_point(z.coords);

  MidpointFrame frame;
  sphere.midpoint_frame(x.coords, z.coords, frame);

  SphereFrame out;
  out.base = x;
  out.vectors.reserve(static_cast<size_t>(frame.count));
  out.eigenvalues.assign(static_cast<size_t>(frame.count), 1.0);
  out.eigenvalues[0] = 0.0;
  const int a = sphere.ambient();
  for (int k = 0; k < frame.count; ++k) {
    Tangent t;
    t.base = x;
    t.vec.assign(frame.vectors.begin() + static_cast<size_t>(k) * a,
                 frame.vectors.begin() + static_cast<size_t>(k + 1) * a);
    out.vectors.push_back(std::move(t));
  }
  return {std::move(out), std::move(frame.weights)};
}

}  // namespace manitv
