// Concrete manifold implementations shared between the core sources.
#pragma once

#include <array>
#include <cstring>
#include <memory>
#include <span>
#include <vector>

#include "manitv/manifold.hpp"

namespace manitv::detail {

/// Stack-first scratch buffer for geometry temporaries; falls back to the
/// heap for ambient sizes above the inline capacity.
template <int N>
class SmallBuf {
 public:
  std::span<double> get(int n) {
    if (n <= N) return {inline_.data(), static_cast<size_t>(n)};
    heap_.resize(static_cast<size_t>(n));
    return {heap_.data(), static_cast<size_t>(n)};
  }

 private:
  std::array<double, N> inline_{};
  std::vector<double> heap_;
};

inline bool bitwise_equal(std::span<const double> a, std::span<const double> b) {
  return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

class EuclideanManifold final : public Manifold {
 public:
  explicit EuclideanManifold(int m);
  void validate_point(std::span<const double> x) const override;
  double dist(std::span<const double> x, std::span<const double> y) const override;
  void exp(std::span<const double> x, std::span<const double> v,
           std::span<double> out) const override;
  void log(std::span<const double> x, std::span<const double> y,
           std::span<double> out) const override;
  void geodesic(std::span<const double> x, std::span<const double> y, double t,
                std::span<double> out) const override;
  void transport(std::span<const double> x, std::span<const double> y,
                 std::span<const double> v, std::span<double> out) const override;
  double inner(std::span<const double> x, std::span<const double> u,
               std::span<const double> v) const override;
  void tangent_basis(std::span<const double> x, std::vector<double>& basis) const override;
  void midpoint_frame(std::span<const double> x, std::span<const double> z,
                      MidpointFrame& out) const override;
  void midpoint_diff_adjoint_limit(std::span<const double> x, std::span<const double> z,
                                   std::span<const double> v,
                                   std::span<double> out) const override;
};

class CircleManifold final : public Manifold {
 public:
  CircleManifold();
  void validate_point(std::span<const double> x) const override;
  double dist(std::span<const double> x, std::span<const double> y) const override;
  void exp(std::span<const double> x, std::span<const double> v,
           std::span<double> out) const override;
  void log(std::span<const double> x, std::span<const double> y,
           std::span<double> out) const override;
  void geodesic(std::span<const double> x, std::span<const double> y, double t,
                std::span<double> out) const override;
  void transport(std::span<const double> x, std::span<const double> y,
                 std::span<const double> v, std::span<double> out) const override;
  double inner(std::span<const double> x, std::span<const double> u,
               std::span<const double> v) const override;
  void tangent_basis(std::span<const double> x, std::vector<double>& basis) const override;
  void midpoint_frame(std::span<const double> x, std::span<const double> z,
                      MidpointFrame& out) const override;
  void midpoint_diff_adjoint_limit(std::span<const double> x, std::span<const double> z,
                                   std::span<const double> v,
                                   std::span<double> out) const override;
};

class SphereManifold final : public Manifold {
 public:
  explicit SphereManifold(int n);
  void validate_point(std::span<const double> x) const override;
  void validate_tangent(std::span<const double> x,
                        std::span<const double> v) const override;
  double dist(std::span<const double> x, std::span<const double> y) const override;
  void exp(std::span<const double> x, std::span<const double> v,
           std::span<double> out) const override;
  void log(std::span<const double> x, std::span<const double> y,
           std::span<double> out) const override;
  void geodesic(std::span<const double> x, std::span<const double> y, double t,
                std::span<double> out) const override;
  void transport(std::span<const double> x, std::span<const double> y,
                 std::span<const double> v, std::span<double> out) const override;
  double inner(std::span<const double> x, std::span<const double> u,
               std::span<const double> v) const override;
  void tangent_basis(std::span<const double> x, std::vector<double>& basis) const override;
  void midpoint_frame(std::span<const double> x, std::span<const double> z,
                      MidpointFrame& out) const override;
  void midpoint_diff_adjoint_limit(std::span<const double> x, std::span<const double> z,
                                   std::span<const double> v,
                                   std::span<double> out) const override;
};

class SpdManifold final : public Manifold {
 public:
  explicit SpdManifold(int r);
  int order() const { return r_; }
  void validate_point(std::span<const double> x) const override;
  void validate_tangent(std::span<const double> x,
                        std::span<const double> v) const override;
  double dist(std::span<const double> x, std::span<const double> y) const override;
  void exp(std::span<const double> x, std::span<const double> v,
           std::span<double> out) const override;
  void log(std::span<const double> x, std::span<const double> y,
           std::span<double> out) const override;
  void geodesic(std::span<const double> x, std::span<const double> y, double t,
                std::span<double> out) const override;
  void transport(std::span<const double> x, std::span<const double> y,
                 std::span<const double> v, std::span<double> out) const override;
  double inner(std::span<const double> x, std::span<const double> u,
               std::span<const double> v) const override;
  void tangent_basis(std::span<const double> x, std::vector<double>& basis) const override;
  void midpoint_frame(std::span<const double> x, std::span<const double> z,
                      MidpointFrame& out) const override;
  void midpoint_diff_adjoint_limit(std::span<const double> x, std::span<const double> z,
                                   std::span<const double> v,
                                   std::span<double> out) const override;

 private:
  int r_;
};

class ProductManifold final : public Manifold {
 public:
  explicit ProductManifold(const ManifoldDescriptor& desc);
  void validate_point(std::span<const double> x) const override;
  void validate_tangent(std::span<const double> x,
                        std::span<const double> v) const override;
  double dist(std::span<const double> x, std::span<const double> y) const override;
  void exp(std::span<const double> x, std::span<const double> v,
           std::span<double> out) const override;
  void log(std::span<const double> x, std::span<const double> y,
           std::span<double> out) const override;
  void geodesic(std::span<const double> x, std::span<const double> y, double t,
                std::span<double> out) const override;
  void transport(std::span<const double> x, std::span<const double> y,
                 std::span<const double> v, std::span<double> out) const override;
  double inner(std::span<const double> x, std::span<const double> u,
               std::span<const double> v) const override;
  void tangent_basis(std::span<const double> x, std::vector<double>& basis) const override;
  void midpoint_frame(std::span<const double> x, std::span<const double> z,
                      MidpointFrame& out) const override;
  void midpoint_diff_adjoint_limit(std::span<const double> x, std::span<const double> z,
                                   std::span<const double> v,
                                   std::span<double> out) const override;

 private:
  template <typename T>
  std::span<T> factor_span(std::span<T> whole, size_t k) const {
    return whole.subspan(static_cast<size_t>(offsets_[k]),
                         static_cast<size_t>(factors_[k]->ambient()));
  }
  std::vector<std::shared_ptr<const Manifold>> factors_;
  std::vector<int> offsets_;
};

}  // namespace manitv::detail
