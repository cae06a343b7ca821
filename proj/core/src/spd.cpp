// P(r): affine-invariant geometry of symmetric positive definite matrices,
// the small cyclic-Jacobi eigensolver, and the whitened eigenframe with its
// Jacobi midpoint weights.
#include "manitv/spd.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "manifolds_internal.hpp"

namespace manitv {

namespace {

using Map = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

double symmetry_defect(const SmallMatrix& a) {
  double defect = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j)
      defect = std::max(defect, std::abs(a(i, j) - a(j, i)));
  return defect;
}

// Cyclic Jacobi sweeps; assumes a is symmetric. Eigenvalues land in `vals`
// ascending, eigenvectors in the columns of `vecs` with the deterministic
// sign convention.
void jacobi_eig(SmallMatrix a, SmallVector& vals, SmallMatrix& vecs) {
  const int r = static_cast<int>(a.rows());
  const double scale = a.norm();
  vecs = SmallMatrix::Identity(r, r);

  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < r; ++p)
      for (int q = p + 1; q < r; ++q) off += 2.0 * a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-13 * scale) break;

    for (int p = 0; p < r; ++p) {
      for (int q = p + 1; q < r; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < r; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < r; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < r; ++k) {
          const double vkp = vecs(k, p), vkq = vecs(k, q);
          vecs(k, p) = c * vkp - s * vkq;
          vecs(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  vals.resize(r);
  for (int i = 0; i < r; ++i) vals(i) = a(i, i);

  std::array<int, 8> order{};
  std::iota(order.begin(), order.begin() + r, 0);
  std::sort(order.begin(), order.begin() + r,
            [&](int u, int v) { return vals(u) < vals(v); });
  SmallVector sorted_vals(r);
  SmallMatrix sorted_vecs(r, r);
  for (int i = 0; i < r; ++i) {
    sorted_vals(i) = vals(order[static_cast<size_t>(i)]);
    sorted_vecs.col(i) = vecs.col(order[static_cast<size_t>(i)]);
  }
  for (int i = 0; i < r; ++i) {
    for (int k = 0; k < r; ++k) {
      if (std::abs(sorted_vecs(k, i)) > 1e-12) {
        if (sorted_vecs(k, i) < 0.0) sorted_vecs.col(i) = -sorted_vecs.col(i);
        break;
      }
    }
  }
  vals = sorted_vals;
  vecs = sorted_vecs;
}

struct SqrtPair {
  SmallMatrix sqrt, inv_sqrt;
};

// x^{1/2} and x^{-1/2} of a positive definite matrix via one decomposition.
SqrtPair spd_sqrt_pair(const SmallMatrix& x) {
  SmallVector vals;
  SmallMatrix vecs;
  jacobi_eig(x, vals, vecs);
  const int r = static_cast<int>(x.rows());
  if (vals(0) <= 0.0)
    throw GeometryDomainError("spd: matrix is not positive definite");
  SmallVector sq(r), isq(r);
  for (int i = 0; i < r; ++i) {
    sq(i) = std::sqrt(vals(i));
    isq(i) = 1.0 / sq(i);
  }
  SqrtPair out;
  out.sqrt = vecs * sq.asDiagonal() * vecs.transpose();
  out.inv_sqrt = vecs * isq.asDiagonal() * vecs.transpose();
  return out;
}

SmallMatrix read_mat(std::span<const double> x, int r) {
  return ConstMap(x.data(), r, r);
}

void write_mat(const SmallMatrix& m, std::span<double> out) {
  Map(out.data(), m.rows(), m.cols()) = m;
}

void write_sym(SmallMatrix m, std::span<double> out) {
  m = 0.5 * (m + m.transpose()).eval();
  write_mat(m, out);
}

// Jacobi midpoint weight on P(r): 1/2 on equal eigenvalues, otherwise the
// sinh ratio from the curvature eigenvalue -(li-lj)^2/4.
double spd_weight(double li, double lj, double t) {
  const double gap = std::abs(li - lj);
  if (gap <= 1e-10 * std::max(1.0, std::abs(li) + std::abs(lj))) return 0.5;
  return std::sinh(0.25 * t * gap) / std::sinh(0.5 * t * gap);
}

}  // namespace

SymEigen sym_eig(const SmallMatrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1 || a.rows() > 8)
    throw ValidationError("sym_eig expects a square matrix of order 1..8");
  if (symmetry_defect(a) > 1e-9)
    throw ValidationError("sym_eig: matrix is not symmetric");
  SymEigen out;
  SmallMatrix s = 0.5 * (a + a.transpose());
  jacobi_eig(s, out.eigenvalues, out.eigenvectors);
  return out;
}

SmallMatrix matrix_exp(const SmallMatrix& a) {
  SymEigen e = sym_eig(a);
  const int r = static_cast<int>(a.rows());
  SmallVector d(r);
  for (int i = 0; i < r; ++i) d(i) = std::exp(e.eigenvalues(i));
  return e.eigenvectors * d.asDiagonal() * e.eigenvectors.transpose();
}

SmallMatrix matrix_log(const SmallMatrix& a) {
  SymEigen e = sym_eig(a);
  const int r = static_cast<int>(a.rows());
  if (e.eigenvalues(0) <= 0.0)
    throw GeometryDomainError("matrix_log: matrix is not positive definite");
  SmallVector d(r);
  for (int i = 0; i < r; ++i) d(i) = std::log(e.eigenvalues(i));
  return e.eigenvectors * d.asDiagonal() * e.eigenvectors.transpose();
}

namespace detail {

SpdManifold::SpdManifold(int r) : Manifold(ManifoldDescriptor::spd(r)), r_(r) {}

void SpdManifold::validate_point(std::span<const double> x) const {
  if (x.size() != static_cast<size_t>(ambient()))
    throw ValidationError("spd point has wrong size");
  for (double c : x)
    if (!std::isfinite(c)) throw ValidationError("spd point has non-finite entry");
  SmallMatrix m = read_mat(x, r_);
  if (symmetry_defect(m) > kPointTol)
    throw ValidationError("spd point is not symmetric");
  SmallVector vals;
  SmallMatrix vecs;
  jacobi_eig(0.5 * (m + m.transpose()), vals, vecs);
  if (vals(0) <= 0.0) throw ValidationError("spd point is not positive definite");
}

void SpdManifold::validate_tangent(std::span<const double> x,
                                   std::span<const double> v) const {
  Manifold::validate_tangent(x, v);
  SmallMatrix m = read_mat(v, r_);
  if (symmetry_defect(m) > kPointTol)
    throw ValidationError("spd tangent is not symmetric");
}

double SpdManifold::dist(std::span<const double> x, std::span<const double> y) const {
  if (bitwise_equal(x, y)) return 0.0;
  const SqrtPair sp = spd_sqrt_pair(read_mat(x, r_));
  SmallMatrix b = sp.inv_sqrt * read_mat(y, r_) * sp.inv_sqrt;
  SmallVector vals;
  SmallMatrix vecs;
  jacobi_eig(0.5 * (b + b.transpose()), vals, vecs);
  if (vals(0) <= 0.0)
    throw GeometryDomainError("spd dist: matrix is not positive definite");
  double s = 0.0;
  for (int i = 0; i < r_; ++i) {
    const double l = std::log(vals(i));
    s += l * l;
  }
  return std::sqrt(s);
}

void SpdManifold::exp(std::span<const double> x, std::span<const double> v,
                      std::span<double> out) const {
  bool zero = true;
  for (double c : v)
    if (c != 0.0) {
      zero = false;
      break;
    }
  if (zero) {
    if (out.data() != x.data()) std::memcpy(out.data(), x.data(), x.size() * sizeof(double));
    return;
  }
  const SqrtPair sp = spd_sqrt_pair(read_mat(x, r_));
  SmallMatrix w = sp.inv_sqrt * read_mat(v, r_) * sp.inv_sqrt;
  w = 0.5 * (w + w.transpose()).eval();
  SmallVector vals;
  SmallMatrix vecs;
  jacobi_eig(w, vals, vecs);
  SmallVector d(r_);
  for (int i = 0; i < r_; ++i) d(i) = std::exp(vals(i));
  SmallMatrix e = vecs * d.asDiagonal() * vecs.transpose();
  write_sym(sp.sqrt * e * sp.sqrt, out);
}

void SpdManifold::log(std::span<const double> x, std::span<const double> y,
                      std::span<double> out) const {
  if (bitwise_equal(x, y)) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const SqrtPair sp = spd_sqrt_pair(read_mat(x, r_));
  SmallMatrix b = sp.inv_sqrt * read_mat(y, r_) * sp.inv_sqrt;
  b = 0.5 * (b + b.transpose()).eval();
  SmallVector vals;
  SmallMatrix vecs;
  jacobi_eig(b, vals, vecs);
  if (vals(0) <= 0.0)
    throw GeometryDomainError("spd log: matrix is not positive definite");
  SmallVector d(r_);
  for (int i = 0; i < r_; ++i) d(i) = std::log(vals(i));
  SmallMatrix l = vecs * d.asDiagonal() * vecs.transpose();
  write_sym(sp.sqrt * l * sp.sqrt, out);
}

void SpdManifold::geodesic(std::span<const double> x, std::span<const double> y,
                           double t, std::span<double> out) const {
  if (t == 0.0 || bitwise_equal(x, y)) {
    if (out.data() != x.data()) std::memcpy(out.data(), x.data(), x.size() * sizeof(double));
    return;
  }
  if (t == 1.0) {
    std::memcpy(out.data(), y.data(), y.size() * sizeof(double));
    return;
  }
  const SqrtPair sp = spd_sqrt_pair(read_mat(x, r_));
  SmallMatrix b = sp.inv_sqrt * read_mat(y, r_) * sp.inv_sqrt;
  b = 0.5 * (b + b.transpose()).eval();
  SmallVector vals;
  SmallMatrix vecs;
  jacobi_eig(b, vals, vecs);
  if (vals(0) <= 0.0)
    throw GeometryDomainError("spd geodesic: matrix is not positive definite");
  SmallVector d(r_);
  for (int i = 0; i < r_; ++i) d(i) = std::exp(t * std::log(vals(i)));
  SmallMatrix bt = vecs * d.asDiagonal() * vecs.transpose();
  write_sym(sp.sqrt * bt * sp.sqrt, out);
}

void SpdManifold::transport(std::span<const double> x, std::span<const double> y,
                            std::span<const double> v, std::span<double> out) const {
  if (bitwise_equal(x, y)) {
    if (out.data() != v.data()) std::memcpy(out.data(), v.data(), v.size() * sizeof(double));
    return;
  }
  const SqrtPair sp = spd_sqrt_pair(read_mat(x, r_));
  SmallMatrix b = sp.inv_sqrt * read_mat(y, r_) * sp.inv_sqrt;
  b = 0.5 * (b + b.transpose()).eval();
  SmallVector vals;
  SmallMatrix vecs;
  jacobi_eig(b, vals, vecs);
  if (vals(0) <= 0.0)
    throw GeometryDomainError("spd transport: matrix is not positive definite");
  SmallVector d(r_);
  for (int i = 0; i < r_; ++i) d(i) = std::sqrt(vals(i));
  SmallMatrix m = vecs * d.asDiagonal() * vecs.transpose();  // b^{1/2}
  SmallMatrix vt = sp.inv_sqrt * read_mat(v, r_) * sp.inv_sqrt;
  write_sym(sp.sqrt * (m * vt * m) * sp.sqrt, out);
}

double SpdManifold::inner(std::span<const double> x, std::span<const double> u,
                          std::span<const double> v) const {
  const SqrtPair sp = spd_sqrt_pair(read_mat(x, r_));
  SmallMatrix uw = sp.inv_sqrt * read_mat(u, r_) * sp.inv_sqrt;
  SmallMatrix vw = sp.inv_sqrt * read_mat(v, r_) * sp.inv_sqrt;
  return (uw.array() * vw.array()).sum();
}

void SpdManifold::tangent_basis(std::span<const double> x,
                                std::vector<double>& basis) const {
  const SqrtPair sp = spd_sqrt_pair(read_mat(x, r_));
  const int a = ambient();
  basis.assign(static_cast<size_t>(dim()) * a, 0.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  int k = 0;
  for (int i = 0; i < r_; ++i) {
    for (int j = i; j < r_; ++j, ++k) {
      SmallMatrix e = SmallMatrix::Zero(r_, r_);
      if (i == j)
        e(i, i) = 1.0;
      else
        e(i, j) = e(j, i) = inv_sqrt2;
      write_mat(sp.sqrt * e * sp.sqrt,
                {basis.data() + static_cast<size_t>(k) * a, static_cast<size_t>(a)});
    }
  }
}

void SpdManifold::midpoint_frame(std::span<const double> x, std::span<const double> z,
                                 MidpointFrame& out) const {
  const SqrtPair sp = spd_sqrt_pair(read_mat(x, r_));
  SmallMatrix b = sp.inv_sqrt * read_mat(z, r_) * sp.inv_sqrt;
  b = 0.5 * (b + b.transpose()).eval();
  SmallVector vals;
  SmallMatrix vecs;
  jacobi_eig(b, vals, vecs);
  if (vals(0) <= 0.0)
    throw GeometryDomainError("spd midpoint frame: matrix is not positive definite");
  double t2 = 0.0;
  for (int i = 0; i < r_; ++i) {
    const double l = std::log(vals(i));
    t2 += l * l;
  }
  const double t = std::sqrt(t2);
  if (t <= kDegenerateT)
    throw GeometryDomainError("midpoint frame: degenerate geodesic on spd");

  // Eigenvalues of the whitened unit direction b_unit = Log(b) / T.
  SmallVector lambda(r_);
  for (int i = 0; i < r_; ++i) lambda(i) = std::log(vals(i)) / t;

  const int a = ambient();
  const int n = dim();
  out.count = n;
  out.vectors.assign(static_cast<size_t>(n) * a, 0.0);
  out.weights.assign(static_cast<size_t>(n), 0.5);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  int k = 0;
  for (int i = 0; i < r_; ++i) {
    for (int j = i; j < r_; ++j, ++k) {
      SmallMatrix e;
      if (i == j)
        e = vecs.col(i) * vecs.col(i).transpose();
      else
        e = inv_sqrt2 * (vecs.col(i) * vecs.col(j).transpose() +
                         vecs.col(j) * vecs.col(i).transpose());
      write_mat(sp.sqrt * e * sp.sqrt,
                {out.vectors.data() + static_cast<size_t>(k) * a, static_cast<size_t>(a)});
      out.weights[static_cast<size_t>(k)] = spd_weight(lambda(i), lambda(j), t);
    }
  }
}

void SpdManifold::midpoint_diff_adjoint_limit(std::span<const double> x,
                                              std::span<const double> z,
                                              std::span<const double> v,
                                              std::span<double> out) const {
  const SqrtPair sp = spd_sqrt_pair(read_mat(x, r_));
  SmallMatrix b = sp.inv_sqrt * read_mat(z, r_) * sp.inv_sqrt;
  b = 0.5 * (b + b.transpose()).eval();
  SmallVector vals;
  SmallMatrix vecs;
  jacobi_eig(b, vals, vecs);
  if (vals(0) <= 0.0)
    throw GeometryDomainError("spd adjoint: matrix is not positive definite");
  double t2 = 0.0;
  for (int i = 0; i < r_; ++i) {
    const double l = std::log(vals(i));
    t2 += l * l;
  }
  const double t = std::sqrt(t2);
  if (t <= kDegenerateT) {
    for (size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * v[i];
    return;
  }
  SmallVector lambda(r_);
  for (int i = 0; i < r_; ++i) lambda(i) = std::log(vals(i)) / t;

  // Pull v back from the midpoint (congruence by b^{-1/4}), rotate into the
  // eigenbasis, scale entries by the Jacobi weights, rotate and map back.
  SmallMatrix vw = sp.inv_sqrt * read_mat(v, r_) * sp.inv_sqrt;
  SmallMatrix m1 = vecs.transpose() * vw * vecs;
  for (int i = 0; i < r_; ++i) {
    const double qi = std::pow(vals(i), -0.25);
    for (int j = 0; j < r_; ++j) {
      const double qj = std::pow(vals(j), -0.25);
      m1(i, j) *= qi * qj * spd_weight(lambda(i), lambda(j), t);
    }
  }
  write_sym(sp.sqrt * (vecs * m1 * vecs.transpose()) * sp.sqrt, out);
}

}  // namespace detail

std::pair<SPDFrame, std::vector<double>> spd_midpoint_weights(const Manifold& spd,
                                                              const Point& x,
                                                              const Point& z) {
  if (spd.descriptor().kind() != ManifoldKind::Spd)
    throw ValidationError("spd_midpoint_weights needs an spd manifold");
  spd.validate_point(x.coords);
  spd.validate_point(z.coords);

  MidpointFrame frame;
  spd.midpoint_frame(x.coords, z.coords, frame);

  const int r = spd.descriptor().param();
  const double t = spd.dist(x.coords, z.coords);
  SPDFrame out;
  out.base = x;
  const int a = spd.ambient();

  // Recover the whitened-direction eigenvalues for the curvature entries.
  const SmallMatrix xm = ConstMap(x.coords.data(), r, r);
  const SqrtPair sp = spd_sqrt_pair(xm);
  SmallMatrix b = sp.inv_sqrt * ConstMap(z.coords.data(), r, r) * sp.inv_sqrt;
  SymEigen be = sym_eig(0.5 * (b + b.transpose()).eval());
  SmallVector lambda(r);
  for (int i = 0; i < r; ++i) lambda(i) = std::log(be.eigenvalues(i)) / t;

  int k = 0;
  for (int i = 0; i < r; ++i) {
    for (int j = i; j < r; ++j, ++k) {
      out.indices.emplace_back(i, j);
      Tangent tan;
      tan.base = x;
      tan.vec.assign(frame.vectors.begin() + static_cast<size_t>(k) * a,
                     frame.vectors.begin() + static_cast<size_t>(k + 1) * a);
      out.vectors.push_back(std::move(tan));
      const double gap = lambda(i) - lambda(j);
      out.eigenvalues.push_back(-0.25 * gap * gap);
    }
  }
  return {std::move(out), std::move(frame.weights)};
}

}  // namespace manitv
