// S^n specifics: the orthonormal frame aligned with a geodesic and the
// Jacobi midpoint weights (constant curvature 1).
#pragma once

#include <utility>
#include <vector>

#include "manitv/manifold.hpp"

namespace manitv {

/// Orthonormal tangent frame at `base` with vectors[0] aligned to the
/// geodesic direction; curvature eigenvalues are 0 for the aligned vector
/// and 1 for the rest.
struct SphereFrame {
  Point base;
  std::vector<Tangent> vectors;
  std::vector<double> eigenvalues;
};

/// Frame and midpoint weights for the geodesic x -> z on S^n:
/// weights[0] = 1/2 and weights[k] = sin(T/2)/sin(T) for k >= 1, where
/// T = dist(x, z). The differential of the midpoint map satisfies
/// D_x c[xi_k] = weights[k] * (xi_k transported to the midpoint).
///
/// Throws GeometryDomainError for degenerate T (below 1e-12 or above
/// pi - 1e-8).
std::pair<SphereFrame, std::vector<double>> sphere_midpoint_weights(
    const Manifold& sphere, const Point& x, const Point& z);

}  // namespace manitv
