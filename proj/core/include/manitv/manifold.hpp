// Manifold descriptors, point/tangent value types, and the geometry
// interface every manifold implementation satisfies.
#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "manitv/errors.hpp"

namespace manitv {

enum class ManifoldKind { Euclidean, Circle, Sphere, Spd, Product };

/// Describes a manifold instance: Euclidean(m), the circle S^1 (angles),
/// the unit sphere S^n, symmetric positive definite matrices P(r), or a
/// finite product of those.
class ManifoldDescriptor {
 public:
  static ManifoldDescriptor euclidean(int m);
  static ManifoldDescriptor circle();
  static ManifoldDescriptor sphere(int n);
  static ManifoldDescriptor spd(int r);
  static ManifoldDescriptor product(std::vector<ManifoldDescriptor> factors);

  ManifoldKind kind() const { return kind_; }
  /// Size parameter: m for Euclidean, n for Sphere, r for SPD, 0 otherwise.
  int param() const { return param_; }
  const std::vector<ManifoldDescriptor>& factors() const { return factors_; }

  /// Intrinsic dimension: m, 1, n, r(r+1)/2, or the sum over factors.
  int dimension() const;
  /// Number of doubles in the ambient representation of one point.
  int ambient_size() const;

  std::string to_string() const;
  bool operator==(const ManifoldDescriptor& other) const;

 private:
  ManifoldDescriptor(ManifoldKind kind, int param) : kind_(kind), param_(param) {}
  ManifoldKind kind_;
  int param_ = 0;
  std::vector<ManifoldDescriptor> factors_;
};

/// A location on a manifold. The coordinate layout is fixed per kind:
/// Euclidean(m): m reals; Circle: one angle in [-pi, pi); Sphere(n): a unit
/// vector of n+1 reals; SPD(r): the r x r matrix, row-major; Product: the
/// concatenation of the factor layouts.
struct Point {
  std::vector<double> coords;
};

/// A tangent vector anchored at `base`, stored in the ambient layout of the
/// manifold of its base point.
struct Tangent {
  Point base;
  std::vector<double> vec;
};

/// Orthonormal frame at x diagonalizing the differential of the midpoint map
/// c(., z), together with the Jacobi midpoint weights w_k so that
/// D_x c[xi_k] = w_k * (xi_k transported to the midpoint).
struct MidpointFrame {
  int count = 0;                // number of frame vectors (= intrinsic dim)
  std::vector<double> vectors;  // count blocks of ambient_size doubles
  std::vector<double> weights;  // count weights
};

/// Geometry interface. All operations are pure; implementations hold no
/// mutable state, so instances may be shared freely between threads.
///
/// The span-level methods assume valid inputs and are the hot path; use
/// validate_point / validate_tangent (or the value-level free functions
/// below) at trust boundaries.
class Manifold {
 public:
  explicit Manifold(ManifoldDescriptor desc);
  virtual ~Manifold() = default;

  const ManifoldDescriptor& descriptor() const { return desc_; }
  int dim() const { return dim_; }
  int ambient() const { return ambient_; }

  /// Throws ValidationError if x is not a valid point representation.
  virtual void validate_point(std::span<const double> x) const = 0;
  /// Throws ValidationError if v is not a valid tangent at x.
  virtual void validate_tangent(std::span<const double> x,
                                std::span<const double> v) const;

  virtual double dist(std::span<const double> x, std::span<const double> y) const = 0;
  virtual void exp(std::span<const double> x, std::span<const double> v,
                   std::span<double> out) const = 0;
  /// Throws GeometryDomainError when y is (numerically) in the cut locus of x.
  virtual void log(std::span<const double> x, std::span<const double> y,
                   std::span<double> out) const = 0;
  /// Point at parameter t on the minimizing geodesic x -> y. Returns x
  /// unchanged (bitwise) when x == y.
  virtual void geodesic(std::span<const double> x, std::span<const double> y,
                        double t, std::span<double> out) const;
  void midpoint(std::span<const double> x, std::span<const double> y,
                std::span<double> out) const {
    geodesic(x, y, 0.5, out);
  }
  /// Parallel transport of the tangent v at x to y along the minimizing
  /// geodesic x -> y.
  virtual void transport(std::span<const double> x, std::span<const double> y,
                         std::span<const double> v, std::span<double> out) const = 0;
  virtual double inner(std::span<const double> x, std::span<const double> u,
                       std::span<const double> v) const = 0;
  double norm(std::span<const double> x, std::span<const double> v) const;

  /// Writes dim() orthonormal tangent vectors at x (row blocks of ambient
  /// doubles) into basis, resizing it.
  virtual void tangent_basis(std::span<const double> x,
                             std::vector<double>& basis) const = 0;

  /// Frame + Jacobi weights of the midpoint map differential for the
  /// geodesic x -> z. Throws GeometryDomainError when the geodesic is
  /// degenerate (dist <= 1e-12) or hits the cut locus.
  virtual void midpoint_frame(std::span<const double> x, std::span<const double> z,
                              MidpointFrame& out) const = 0;

  /// Adjoint of D_x c applied to a tangent v sitting at the midpoint c(x,z):
  /// returns sum_k w_k <v, Xi_k(T/2)> xi_k as a tangent at x. Equivalently,
  /// transports v back to x, expands it in the midpoint frame and scales the
  /// coordinates by the weights. Throws GeometryDomainError when the
  /// geodesic x -> z is degenerate.
  void midpoint_diff_adjoint(std::span<const double> x, std::span<const double> z,
                             std::span<const double> v, std::span<double> out) const;

  /// Same map, but degenerate geodesics take the flat limit (all weights
  /// 1/2, transport -> identity, so out = v/2). Gradient assembly and
  /// product composition use this variant; the public operation above
  /// enforces the non-degeneracy contract.
  virtual void midpoint_diff_adjoint_limit(std::span<const double> x,
                                           std::span<const double> z,
                                           std::span<const double> v,
                                           std::span<double> out) const;

 protected:
  /// Generic frame-based implementation of midpoint_diff_adjoint_limit.
  void adjoint_via_frame(std::span<const double> x, std::span<const double> z,
                         std::span<const double> v, std::span<double> out) const;

 private:
  ManifoldDescriptor desc_;
  int dim_ = 0;
  int ambient_ = 0;
};

/// Instantiates the geometry for a descriptor. SPD sizes are limited to
/// 2 <= r <= 8 (small dense kernels).
std::shared_ptr<const Manifold> make_manifold(const ManifoldDescriptor& desc);

// Value-level operations. These validate their inputs and mirror the
// span-level interface; geometry code on images uses the span layer instead.
double dist(const Manifold& m, const Point& x, const Point& y);
Point exp(const Manifold& m, const Point& x, const Tangent& xi);
Tangent log(const Manifold& m, const Point& x, const Point& y);
Point geodesic_point(const Manifold& m, const Point& x, const Point& y, double t);
Point midpoint(const Manifold& m, const Point& x, const Point& y);
Tangent parallel_transport(const Manifold& m, const Point& x, const Point& y,
                           const Tangent& xi);
double inner(const Manifold& m, const Point& x, const Tangent& xi, const Tangent& eta);

Point make_point(const Manifold& m, std::vector<double> coords);
Tangent make_tangent(const Manifold& m, Point base, std::vector<double> vec);
Tangent zero_tangent(const Manifold& m, Point base);

// Numerical policy shared by the geometry implementations.
inline constexpr double kCutLocusTol = 1e-8;    // "within 1e-8 of the cut locus"
inline constexpr double kDegenerateT = 1e-12;   // geodesic considered degenerate
inline constexpr double kPointTol = 1e-9;       // point/tangent invariant tolerance

}  // namespace manitv
