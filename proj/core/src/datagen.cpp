// Synthetic experiment data, noise models, and the mean error metric.
#include "manitv/datagen.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "manitv/spd.hpp"

namespace manitv {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Matrix3d rot12(double t) {
  Eigen::Matrix3d r;
  r << std::cos(t), -std::sin(t), 0.0, std::sin(t), std::cos(t), 0.0, 0.0, 0.0, 1.0;
  return r;
}

Eigen::Matrix3d rot23(double t) {
  Eigen::Matrix3d r;
  r << 1.0, 0.0, 0.0, 0.0, std::cos(t), -std::sin(t), 0.0, std::sin(t), std::cos(t);
  return r;
}

}  // namespace

ManifoldImage gen_lemniscate(int count) {
  if (count < 2) throw ValidationError("gen_lemniscate: count must be at least 2");
  auto sphere = make_manifold(ManifoldDescriptor::sphere(2));
  ManifoldImage img(sphere, count, 1);

  const double a = kPi / (2.0 * std::sqrt(2.0));
  const double north[3] = {0.0, 0.0, 1.0};
  for (int i = 0; i < count; ++i) {
    const double t = 2.0 * kPi * i / (count - 1);
    const double scale = a * std::sqrt(2.0) / (std::sin(t) * std::sin(t) + 1.0);
    // Planar curve in the tangent plane at the north pole (axes e1, e2),
    // pushed to the sphere through the exponential map.
    const double v[3] = {scale * std::cos(t), scale * std::cos(t) * std::sin(t), 0.0};
    sphere->exp({north, 3}, {v, 3}, img.pixel(i, 0));
  }
  return img;
}

ManifoldImage gen_s2_field(int n) {
  if (n < 2) throw ValidationError("gen_s2_field: n must be at least 2");
  auto sphere = make_manifold(ManifoldDescriptor::sphere(2));
  ManifoldImage img(sphere, n, n);

  for (int i = 0; i < n; ++i) {
    const double t = 5.0 * kPi * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double s = 2.0 * kPi * j / (n - 1);
      // G(t,s) = R_{t+s} S_{t-s} e3 with R a rotation about the x3 axis and
      // S a rotation in the x1,x3 plane.
      const double th1 = t + s, th2 = t - s;
      auto px = img.pixel(i, j);
      px[0] = -std::cos(th1) * std::sin(th2);
      px[1] = -std::sin(th1) * std::sin(th2);
      px[2] = std::cos(th2);
    }
  }
  return img;
}

ManifoldImage gen_spd_image(int n) {
  if (n < 2) throw ValidationError("gen_spd_image: n must be at least 2");
  auto spd = make_manifold(ManifoldDescriptor::spd(3));
  ManifoldImage img(spd, n, n);

  const auto step = [](double a, double b) { return a > b ? 1.0 : 0.0; };
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double t = static_cast<double>(j) / (n - 1);
      Eigen::Vector3d diag(1.0 + step(s + t, 1.0),
                           1.0 + s + t + 1.5 * step(s, 0.5),
                           4.0 - s - t + 1.5 * step(t, 0.5));
      const double frac = (t - s) - std::floor(t - s);
      const Eigen::Matrix3d rot = rot23(kPi * s) *
                                  rot12(std::abs(2.0 * kPi * s - kPi)) *
                                  rot12(std::abs(kPi * frac - kPi));
      const Eigen::Matrix3d g = rot * diag.asDiagonal() * rot.transpose();
      auto px = img.pixel(i, j);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) px[static_cast<size_t>(3 * r + c)] = g(r, c);
    }
  }
  return img;
}

ManifoldImage add_noise(const ManifoldImage& image, const NoiseSpec& spec) {
  if (!(spec.sigma > 0.0)) throw ValidationError("add_noise: sigma must be positive");
  const Manifold& m = image.manifold();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, spec.sigma);

  ManifoldImage out(image.manifold_ptr(), image.rows(), image.cols());

  if (spec.model == NoiseModel::GaussianTangent) {
    std::vector<double> basis;
    std::vector<double> v(static_cast<size_t>(m.ambient()));
    for (long q = 0; q < image.pixel_count(); ++q) {
      const auto x = image.pixel(q);
      m.tangent_basis(x, basis);
      std::fill(v.begin(), v.end(), 0.0);
      for (int k = 0; k < m.dim(); ++k) {
        const double c = normal(rng);
        for (int i = 0; i < m.ambient(); ++i)
          v[static_cast<size_t>(i)] +=
              c * basis[static_cast<size_t>(k) * m.ambient() + i];
      }
      m.exp(x, v, out.pixel(q));
    }
    return out;
  }

  // RicianEntrywise: perturb the matrix square root entrywise and square it
  // back, clamping eigenvalues away from zero.
  if (m.descriptor().kind() != ManifoldKind::Spd)
    throw ValidationError("add_noise: Rician noise is only defined on SPD images");
  const int r = m.descriptor().param();
  for (long q = 0; q < image.pixel_count(); ++q) {
    const auto x = image.pixel(q);
    SmallMatrix mat(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) mat(i, j) = x[static_cast<size_t>(r * i + j)];
    SymEigen e = sym_eig(mat);
    SmallVector sq(r);
    for (int i = 0; i < r; ++i) sq(i) = std::sqrt(e.eigenvalues(i));
    SmallMatrix root = e.eigenvectors * sq.asDiagonal() * e.eigenvectors.transpose();
    for (int i = 0; i < r; ++i)
      for (int j = i; j < r; ++j) {
        const double nij = normal(rng);
        root(i, j) += nij;
        if (i != j) root(j, i) += nij;
      }
    SmallMatrix noisy = root * root;  // symmetric PSD by construction
    SymEigen ne = sym_eig(0.5 * (noisy + noisy.transpose()).eval());
    SmallVector clamped(r);
    for (int i = 0; i < r; ++i) clamped(i) = std::max(ne.eigenvalues(i), 1e-6);
    noisy = ne.eigenvectors * clamped.asDiagonal() * ne.eigenvectors.transpose();
    auto px = out.pixel(q);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) px[static_cast<size_t>(r * i + j)] = noisy(i, j);
  }
  return out;
}

double mean_error(const ManifoldImage& x, const ManifoldImage& y) {
  if (!x.same_shape(y)) throw ValidationError("mean_error: images have different shapes");
  const Manifold& m = x.manifold();
  double s = 0.0;
  for (long q = 0; q < x.pixel_count(); ++q) s += m.dist(x.pixel(q), y.pixel(q));
  return s / static_cast<double>(x.pixel_count());
}

}  // namespace manitv
