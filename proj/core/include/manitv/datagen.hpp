// Synthetic data generators, tangent-space noise, and the mean error metric.
#pragma once

#include <cstdint>

#include "manitv/image.hpp"

namespace manitv {

/// Lemniscate of Bernoulli (a = pi/(2 sqrt 2)) embedded in the tangent plane
/// at the north pole of S^2 and mapped through the exponential map; sampled
/// at t_i = 2 pi i / (count - 1), so first and last point coincide and the
/// extremal points are antipodal. Returns a count x 1 signal.
ManifoldImage gen_lemniscate(int count);

/// S^2-valued vector field G(t,s) = R_{t+s} S_{t-s} e3 sampled with n
/// equispaced values of t in [0, 5 pi] (rows) and s in [0, 2 pi] (columns).
ManifoldImage gen_s2_field(int n);

/// Artificial P(3)-valued n x n image: rotated diagonal matrices with
/// eigenvalue jumps across both center lines and the diagonal; s indexes
/// rows, t columns, both in [0, 1].
ManifoldImage gen_spd_image(int n);

enum class NoiseModel { GaussianTangent, RicianEntrywise };

/// Noise description. GaussianTangent draws i.i.d. normal coefficients
/// (std sigma) in an orthonormal tangent basis and applies exp; it is valid
/// on any manifold. RicianEntrywise perturbs the entries of the matrix
/// square root and reconstructs an SPD matrix; it is valid on SPD images
/// only. sigma must be positive.
struct NoiseSpec {
  NoiseModel model = NoiseModel::GaussianTangent;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Deterministic per seed. Throws ValidationError for sigma <= 0 or a
/// Rician spec on a non-SPD manifold.
ManifoldImage add_noise(const ManifoldImage& image, const NoiseSpec& spec);

/// Mean error E(x,y) = (1/|G|) sum_i d(x_i, y_i). Throws ValidationError on
/// shape mismatch.
double mean_error(const ManifoldImage& x, const ManifoldImage& y);

}  // namespace manitv
