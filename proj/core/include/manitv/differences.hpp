// Absolute second-order difference d2, mixed difference d11, and their
// Riemannian (sub)gradients assembled from Jacobi midpoint weights.
#pragma once

#include <span>

#include "manitv/manifold.hpp"

namespace manitv {

/// d2(x, y, z) = dist(c(x,z), y) with c the minimizing-geodesic midpoint.
/// Throws GeometryDomainError when (x, z) is a cut-locus pair.
double d2(const Manifold& m, std::span<const double> x, std::span<const double> y,
          std::span<const double> z);

/// d11(w, x, y, z) = dist(c(w,y), c(x,z)).
double d11(const Manifold& m, std::span<const double> w, std::span<const double> x,
           std::span<const double> y, std::span<const double> z);

/// Adjoint of the midpoint-map differential: v lives at c(x,z), the result
/// at x. Thin forwarder to Manifold::midpoint_diff_adjoint.
void adjoint_midpoint_differential(const Manifold& m, std::span<const double> x,
                                   std::span<const double> z,
                                   std::span<const double> v, std::span<double> out);

/// Riemannian gradient of d2 at (x, y, z), one tangent per argument. All
/// three are the zero subgradient exactly when y is (numerically) the
/// midpoint of x and z.
struct GradTriple {
  Tangent gx, gy, gz;
};

/// Span-level gradient: writes the three tangents and returns the d2 value.
/// The zero-subgradient branch (d2 below 1e-12 * (1 + dist(x,z))) writes
/// zeros and returns the tiny d2 value.
double grad_d2(const Manifold& m, std::span<const double> x,
               std::span<const double> y, std::span<const double> z,
               std::span<double> gx, std::span<double> gy, std::span<double> gz);

/// Span-level gradient of d11; returns the d11 value, zero quadruple when
/// the two midpoints coincide.
double grad_d11(const Manifold& m, std::span<const double> w,
                std::span<const double> x, std::span<const double> y,
                std::span<const double> z, std::span<double> gw,
                std::span<double> gx, std::span<double> gy, std::span<double> gz);

// Value-level wrappers (validated inputs).
double d2(const Manifold& m, const Point& x, const Point& y, const Point& z);
double d11(const Manifold& m, const Point& w, const Point& x, const Point& y,
           const Point& z);
Tangent adjoint_midpoint_differential(const Manifold& m, const Point& x,
                                      const Point& z, const Tangent& v);
GradTriple grad_d2(const Manifold& m, const Point& x, const Point& y, const Point& z);
struct GradQuad {
  Tangent gw, gx, gy, gz;
};
GradQuad grad_d11(const Manifold& m, const Point& w, const Point& x, const Point& y,
                  const Point& z);

}  // namespace manitv
