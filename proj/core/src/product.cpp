// Product manifolds: factor-wise operations with the unweighted l2 metric.
#include <cmath>
#include <cstring>

#include "manifolds_internal.hpp"

namespace manitv::detail {

ProductManifold::ProductManifold(const ManifoldDescriptor& desc) : Manifold(desc) {
  int off = 0;
  for (const auto& f : desc.factors()) {
    factors_.push_back(make_manifold(f));
    offsets_.push_back(off);
    off += f.ambient_size();
  }
}

void ProductManifold::validate_point(std::span<const double> x) const {
  if (x.size() != static_cast<size_t>(ambient()))
    throw ValidationError("product point has wrong size");
  for (size_t k = 0; k < factors_.size(); ++k)
    factors_[k]->validate_point(factor_span(x, k));
}

void ProductManifold::validate_tangent(std::span<const double> x,
                                       std::span<const double> v) const {
  Manifold::validate_tangent(x, v);
  for (size_t k = 0; k < factors_.size(); ++k)
    factors_[k]->validate_tangent(factor_span(x, k), factor_span(v, k));
}

double ProductManifold::dist(std::span<const double> x, std::span<const double> y) const {
  double s = 0.0;
  for (size_t k = 0; k < factors_.size(); ++k) {
    const double d = factors_[k]->dist(factor_span(x, k), factor_span(y, k));
    s += d * d;
  }
  return std::sqrt(s);
}

void ProductManifold::exp(std::span<const double> x, std::span<const double> v,
                          std::span<double> out) const {
  for (size_t k = 0; k < factors_.size(); ++k)
    factors_[k]->exp(factor_span(x, k), factor_span(v, k), factor_span(out, k));
}

void ProductManifold::log(std::span<const double> x, std::span<const double> y,
                          std::span<double> out) const {
  for (size_t k = 0; k < factors_.size(); ++k)
    factors_[k]->log(factor_span(x, k), factor_span(y, k), factor_span(out, k));
}

void ProductManifold::geodesic(std::span<const double> x, std::span<const double> y,
                               double t, std::span<double> out) const {
  for (size_t k = 0; k < factors_.size(); ++k)
    factors_[k]->geodesic(factor_span(x, k), factor_span(y, k), t, factor_span(out, k));
}

void ProductManifold::transport(std::span<const double> x, std::span<const double> y,
                                std::span<const double> v, std::span<double> out) const {
  for (size_t k = 0; k < factors_.size(); ++k)
    factors_[k]->transport(factor_span(x, k), factor_span(y, k), factor_span(v, k),
                           factor_span(out, k));
}

double ProductManifold::inner(std::span<const double> x, std::span<const double> u,
                              std::span<const double> v) const {
  double s = 0.0;
  for (size_t k = 0; k < factors_.size(); ++k)
    s += factors_[k]->inner(factor_span(x, k), factor_span(u, k), factor_span(v, k));
  return s;
}

void ProductManifold::tangent_basis(std::span<const double> x,
                                    std::vector<double>& basis) const {
  const int a = ambient();
  basis.assign(static_cast<size_t>(dim()) * a, 0.0);
  int row = 0;
  std::vector<double> sub;
  for (size_t k = 0; k < factors_.size(); ++k) {
    const Manifold& f = *factors_[k];
    f.tangent_basis(factor_span(x, k), sub);
    for (int j = 0; j < f.dim(); ++j, ++row)
      std::memcpy(basis.data() + static_cast<size_t>(row) * a + offsets_[k],
                  sub.data() + static_cast<size_t>(j) * f.ambient(),
                  static_cast<size_t>(f.ambient()) * sizeof(double));
  }
}

void ProductManifold::midpoint_frame(std::span<const double> x, std::span<const double> z,
                                     MidpointFrame& out) const {
  if (dist(x, z) <= kDegenerateT)
    throw GeometryDomainError("midpoint frame: degenerate geodesic on product");
  const int a = ambient();
  out.count = dim();
  out.vectors.assign(static_cast<size_t>(dim()) * a, 0.0);
  out.weights.assign(static_cast<size_t>(dim()), 0.5);

  int row = 0;
  MidpointFrame sub;
  std::vector<double> sub_basis;
  for (size_t k = 0; k < factors_.size(); ++k) {
    const Manifold& f = *factors_[k];
    const auto xk = factor_span(x, k);
    const auto zk = factor_span(z, k);
    // Degenerate factors take the flat limit: any orthonormal basis, 1/2.
    if (f.dist(xk, zk) <= kDegenerateT) {
      f.tangent_basis(xk, sub_basis);
      for (int j = 0; j < f.dim(); ++j, ++row)
        std::memcpy(out.vectors.data() + static_cast<size_t>(row) * a + offsets_[k],
                    sub_basis.data() + static_cast<size_t>(j) * f.ambient(),
                    static_cast<size_t>(f.ambient()) * sizeof(double));
      continue;
    }
    f.midpoint_frame(xk, zk, sub);
    for (int j = 0; j < sub.count; ++j, ++row) {
      std::memcpy(out.vectors.data() + static_cast<size_t>(row) * a + offsets_[k],
                  sub.vectors.data() + static_cast<size_t>(j) * f.ambient(),
                  static_cast<size_t>(f.ambient()) * sizeof(double));
      out.weights[static_cast<size_t>(row)] = sub.weights[static_cast<size_t>(j)];
    }
  }
}

void ProductManifold::midpoint_diff_adjoint_limit(std::span<const double> x,
                                                  std::span<const double> z,
                                                  std::span<const double> v,
                                                  std::span<double> out) const {
  for (size_t k = 0; k < factors_.size(); ++k)
    factors_[k]->midpoint_diff_adjoint_limit(factor_span(x, k), factor_span(z, k),
                                             factor_span(v, k), factor_span(out, k));
}

}  // namespace manitv::detail
