// P(r) specifics: the small symmetric eigensolver, matrix exp/log, and the
// eigenframe + Jacobi midpoint weights (nonpositive curvature).
#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "manitv/manifold.hpp"

namespace manitv {

// Dense kernels are sized for r <= 8; storage stays on the stack.
using SmallMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor, 8, 8>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;

/// Eigendecomposition A = Q diag(eigenvalues) Q^T with ascending eigenvalues
/// and a deterministic sign convention (first component of each eigenvector
/// of magnitude above 1e-12 is positive).
struct SymEigen {
  SmallVector eigenvalues;   // ascending
  SmallMatrix eigenvectors;  // orthonormal columns
};

/// Cyclic Jacobi eigensolver for small symmetric matrices. Sweeps until the
/// off-diagonal Frobenius mass drops below 1e-13 * ||A||_F (at most 50
/// sweeps). Throws ValidationError when A is not symmetric to 1e-9.
SymEigen sym_eig(const SmallMatrix& a);

/// Matrix exponential of a symmetric matrix, via sym_eig.
SmallMatrix matrix_exp(const SmallMatrix& a);
/// Matrix logarithm of a symmetric positive definite matrix, via sym_eig.
/// Throws GeometryDomainError when a is not positive definite.
SmallMatrix matrix_log(const SmallMatrix& a);

/// Eigenframe of the midpoint-map differential on P(r) at base x for the
/// geodesic x -> z. Index set {(i,j) : i <= j}; vectors are orthonormal
/// under the metric at x; curvature eigenvalues are -(lambda_i-lambda_j)^2/4
/// with lambda the eigenvalues of the whitened unit direction
/// b = x^{-1/2} (log_x z / T) x^{-1/2}.
struct SPDFrame {
  Point base;
  std::vector<std::pair<int, int>> indices;
  std::vector<Tangent> vectors;
  std::vector<double> eigenvalues;
};

/// Frame and midpoint weights per Jacobi theory on P(r): weight 1/2 when
/// lambda_i = lambda_j, else sinh(T|l_i-l_j|/4)/sinh(T|l_i-l_j|/2).
/// Throws GeometryDomainError for degenerate T <= 1e-12 (P(r) has no cut
/// locus, so there is no upper bound).
std::pair<SPDFrame, std::vector<double>> spd_midpoint_weights(
    const Manifold& spd, const Point& x, const Point& z);

}  // namespace manitv
