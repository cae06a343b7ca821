// Shared test helpers: seeded random samplers per manifold and
// finite-difference oracles.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "manitv/manifold.hpp"

namespace testsupport {

using manitv::Manifold;
using manitv::ManifoldDescriptor;
using manitv::ManifoldKind;
using manitv::Point;
using manitv::Tangent;

inline Point random_point(const Manifold& m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto& d = m.descriptor();
  Point p;
  switch (d.kind()) {
    case ManifoldKind::Euclidean: {
      for (int i = 0; i < m.ambient(); ++i) p.coords.push_back(normal(rng));
      break;
    }
    case ManifoldKind::Circle: {
      std::uniform_real_distribution<double> uni(-3.14159, 3.14159);
      p.coords.push_back(uni(rng));
      break;
    }
    case ManifoldKind::Sphere: {
      double n2 = 0.0;
      do {
        p.coords.clear();
        n2 = 0.0;
        for (int i = 0; i < m.ambient(); ++i) {
          p.coords.push_back(normal(rng));
          n2 += p.coords.back() * p.coords.back();
        }
      } while (n2 < 1e-6);
      const double inv = 1.0 / std::sqrt(n2);
      for (auto& c : p.coords) c *= inv;
      break;
    }
    case ManifoldKind::Spd: {
      const int r = d.param();
      std::vector<double> b(static_cast<size_t>(r) * r);
      for (auto& c : b) c = normal(rng);
      // x = 0.35 B B^T + 0.5 I: symmetric, safely positive definite.
      p.coords.assign(static_cast<size_t>(r) * r, 0.0);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
          double s = 0.0;
          for (int k = 0; k < r; ++k)
            s += b[static_cast<size_t>(r) * i + k] * b[static_cast<size_t>(r) * j + k];
          p.coords[static_cast<size_t>(r) * i + j] = 0.35 * s + (i == j ? 0.5 : 0.0);
        }
      break;
    }
    case ManifoldKind::Product: {
      for (const auto& f : d.factors()) {
        auto sub = make_manifold(f);
        Point q = random_point(*sub, rng);
        p.coords.insert(p.coords.end(), q.coords.begin(), q.coords.end());
      }
      break;
    }
  }
  return p;
}

inline Tangent random_tangent(const Manifold& m, const Point& x, std::mt19937_64& rng,
                              double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> basis;
  m.tangent_basis(x.coords, basis);
  Tangent t;
  t.base = x;
  t.vec.assign(static_cast<size_t>(m.ambient()), 0.0);
  for (int k = 0; k < m.dim(); ++k) {
    const double c = normal(rng);
    for (int i = 0; i < m.ambient(); ++i)
      t.vec[static_cast<size_t>(i)] +=
          c * basis[static_cast<size_t>(k) * m.ambient() + i];
  }
  return t;
}

/// Random second point with distance in [lo, hi] from x (resamples).
inline Point random_point_near(const Manifold& m, const Point& x, std::mt19937_64& rng,
                               double lo, double hi) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    Point y = random_point(m, rng);
    const double d = m.dist(x.coords, y.coords);
    if (d >= lo && d <= hi) return y;
  }
  // Fall back to a controlled exponential step.
  Tangent t = random_tangent(m, x, rng, 1.0);
  double n = m.norm(x.coords, t.vec);
  const double target = 0.5 * (lo + hi);
  for (auto& c : t.vec) c *= target / n;
  return manitv::exp(m, x, t);
}

/// Central difference of a scalar function along eta at x.
template <typename F>
double directional_derivative(const Manifold& m, const Point& x, const Tangent& eta,
                              F&& f, double h = 1e-6) {
  Tangent step = eta;
  for (auto& c : step.vec) c *= h;
  const Point xp = manitv::exp(m, x, step);
  for (auto& c : step.vec) c = -c;
  const Point xm = manitv::exp(m, x, step);
  return (f(xp) - f(xm)) / (2.0 * h);
}

inline std::vector<ManifoldDescriptor> standard_test_manifolds() {
  return {
      ManifoldDescriptor::euclidean(3),  ManifoldDescriptor::circle(),
      ManifoldDescriptor::sphere(2),     ManifoldDescriptor::sphere(3),
      ManifoldDescriptor::spd(2),        ManifoldDescriptor::spd(3),
  };
}

/// Caps for random pair distances per manifold: spheres and circles must
/// stay clear of the cut locus.
inline double pair_distance_cap(const ManifoldDescriptor& d) {
  if (d.kind() == ManifoldKind::Sphere || d.kind() == ManifoldKind::Circle)
    return 2.4;  // < pi - margin
  return 1e9;
}

}  // namespace testsupport
