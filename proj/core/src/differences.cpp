// Second-order differences and their gradients via the midpoint adjoint.
#include "manitv/differences.hpp"

#include <algorithm>
#include <cmath>

#include "manifolds_internal.hpp"

namespace manitv {

namespace {

double coord_norm(std::span<const double> a) {
  double s = 0.0;
  for (double c : a) s += c * c;
  return std::sqrt(s);
}

// "y equals the midpoint" threshold: absolute with a coordinate-scale term.
double zero_tol(std::span<const double> c, std::span<const double> y) {
  return 1e-12 * (1.0 + coord_norm(c) + coord_norm(y));
}

void check_point_arg(const Manifold& m, const Point& p, const char* what) {
  if (p.coords.size() != static_cast<size_t>(m.ambient()))
    throw ValidationError(std::string(what) + ": wrong ambient size");
  m.validate_point(p.coords);
}

}  // namespace

double d2(const Manifold& m, std::span<const double> x, std::span<const double> y,
          std::span<const double> z) {
  detail::SmallBuf<64> buf;
  auto c = buf.get(m.ambient());
  m.midpoint(x, z, c);
  return m.dist(c, y);
}

double d11(const Manifold& m, std::span<const double> w, std::span<const double> x,
           std::span<const double> y, std::span<const double> z) {
  detail::SmallBuf<64> b1, b2;
  auto c = b1.get(m.ambient());
  auto ct = b2.get(m.ambient());
  m.midpoint(w, y, c);
  m.midpoint(x, z, ct);
  return m.dist(c, ct);
}

void adjoint_midpoint_differential(const Manifold& m, std::span<const double> x,
                                   std::span<const double> z,
                                   std::span<const double> v, std::span<double> out) {
  m.midpoint_diff_adjoint(x, z, v, out);
}

double grad_d2(const Manifold& m, std::span<const double> x,
               std::span<const double> y, std::span<const double> z,
               std::span<double> gx, std::span<double> gy, std::span<double> gz) {
  const int a = m.ambient();
  detail::SmallBuf<64> cbuf, vbuf;
  auto c = cbuf.get(a);
  auto v = vbuf.get(a);

  m.midpoint(x, z, c);
  m.log(c, y, v);
  const double dval = m.norm(c, v);
  if (dval <= zero_tol(c, y)) {
    // Subgradient choice at the nonsmooth point.
    std::fill(gx.begin(), gx.end(), 0.0);
    std::fill(gy.begin(), gy.end(), 0.0);
    std::fill(gz.begin(), gz.end(), 0.0);
    return dval;
  }
  // Unit tangent at the midpoint pointing away from y.
  for (auto& e : v) e *= -1.0 / dval;

  m.log(y, c, gy);
  const double inv = -1.0 / dval;  // ||log_y c|| = dist(y, c) = dval
  for (auto& e : gy) e *= inv;

  m.midpoint_diff_adjoint_limit(x, z, v, gx);
  m.midpoint_diff_adjoint_limit(z, x, v, gz);
  return dval;
}

double grad_d11(const Manifold& m, std::span<const double> w,
                std::span<const double> x, std::span<const double> y,
                std::span<const double> z, std::span<double> gw,
                std::span<double> gx, std::span<double> gy, std::span<double> gz) {
  const int a = m.ambient();
  detail::SmallBuf<64> b1, b2, b3, b4;
  auto c = b1.get(a);
  auto ct = b2.get(a);
  auto u = b3.get(a);
  auto ut = b4.get(a);

  m.midpoint(w, y, c);
  m.midpoint(x, z, ct);
  const double dval = m.dist(c, ct);
  if (dval <= zero_tol(c, ct)) {
    std::fill(gw.begin(), gw.end(), 0.0);
    std::fill(gx.begin(), gx.end(), 0.0);
    std::fill(gy.begin(), gy.end(), 0.0);
    std::fill(gz.begin(), gz.end(), 0.0);
    return dval;
  }
  m.log(c, ct, u);
  for (auto& e : u) e *= -1.0 / dval;
  m.log(ct, c, ut);
  for (auto& e : ut) e *= -1.0 / dval;

  m.midpoint_diff_adjoint_limit(w, y, u, gw);
  m.midpoint_diff_adjoint_limit(y, w, u, gy);
  m.midpoint_diff_adjoint_limit(x, z, ut, gx);
  m.midpoint_diff_adjoint_limit(z, x, ut, gz);
  return dval;
}

double d2(const Manifold& m, const Point& x, const Point& y, const Point& z) {
  check_point_arg(m, x, "d2");
  check_point_arg(m, y, "d2");
  check_point_arg(m, z, "d2");
  return d2(m, std::span<const double>(x.coords), y.coords, z.coords);
}

double d11(const Manifold& m, const Point& w, const Point& x, const Point& y,
           const Point& z) {
  check_point_arg(m, w, "d11");
  check_point_arg(m, x, "d11");
  check_point_arg(m, y, "d11");
  check_point_arg(m, z, "d11");
  return d11(m, std::span<const double>(w.coords), x.coords, y.coords, z.coords);
}

Tangent adjoint_midpoint_differential(const Manifold& m, const Point& x,
                                      const Point& z, const Tangent& v) {
  check_point_arg(m, x, "adjoint_midpoint_differential");
  check_point_arg(m, z, "adjoint_midpoint_differential");
  Tangent out;
  out.base = x;
  out.vec.resize(static_cast<size_t>(m.ambient()));
  m.midpoint_diff_adjoint(x.coords, z.coords, v.vec, out.vec);
  return out;
}

GradTriple grad_d2(const Manifold& m, const Point& x, const Point& y, const Point& z) {
  check_point_arg(m, x, "grad_d2");
  check_point_arg(m, y, "grad_d2");
  check_point_arg(m, z, "grad_d2");
  GradTriple g;
  g.gx.base = x;
  g.gy.base = y;
  g.gz.base = z;
  const size_t a = static_cast<size_t>(m.ambient());
  g.gx.vec.resize(a);
  g.gy.vec.resize(a);
  g.gz.vec.resize(a);
  grad_d2(m, std::span<const double>(x.coords), y.coords, z.coords, g.gx.vec,
          g.gy.vec, g.gz.vec);
  return g;
}

GradQuad grad_d11(const Manifold& m, const Point& w, const Point& x, const Point& y,
                  const Point& z) {
  check_point_arg(m, w, "grad_d11");
  check_point_arg(m, x, "grad_d11");
  check_point_arg(m, y, "grad_d11");
  check_point_arg(m, z, "grad_d11");
  GradQuad g;
  g.gw.base = w;
  g.gx.base = x;
  g.gy.base = y;
  g.gz.base = z;
  const size_t a = static_cast<size_t>(m.ambient());
  g.gw.vec.resize(a);
  g.gx.vec.resize(a);
  g.gy.vec.resize(a);
  g.gz.vec.resize(a);
  grad_d11(m, std::span<const double>(w.coords), x.coords, y.coords, z.coords,
           g.gw.vec, g.gx.vec, g.gy.vec, g.gz.vec);
  return g;
}

}  // namespace manitv
