// Proximal maps of the functional atoms: closed forms for the data and
// first-difference terms, subgradient-descent approximations for d2/d11.
#pragma once

#include <array>
#include <optional>
#include <span>

#include "manitv/manifold.hpp"

namespace manitv {

/// Inner subgradient loop schedule. The step sequence tau_j = tau0 / j lies
/// in l2 \ l1.
struct ProxSchedule {
  /// Seed of the inner step sequence for psi = 1/2 sum d(x_j,g_j)^2 + mu D.
  /// Unset means 1, which equilibrates the unit-curvature data coupling and
  /// equals the seed lambda_k when the descent is read on the equivalent
  /// (1/(2 lambda))-scaled prox objective.
  std::optional<double> tau0;
  int max_inner_iters = 50;
  /// Optional early exit once the step norm drops below this; 0 runs all
  /// iterations.
  double stop_tol = 0.0;
};

/// Exact prox of lambda * (1/2) d(., f)^2 at x: the geodesic point
/// gamma(x -> f; lambda/(1+lambda)).
void prox_data(const Manifold& m, double lambda, std::span<const double> f,
               std::span<const double> x, std::span<double> out);

/// Exact prox of mu * d(., .) at (x1, x2): both points move toward each
/// other by t = min(mu, d/2); inputs pass through unchanged when
/// d <= 1e-14.
void prox_dist_pair(const Manifold& m, double mu, std::span<const double> x1,
                    std::span<const double> x2, std::span<double> out1,
                    std::span<double> out2);

/// Outcome of an inexact prox: best objective value seen, iterations run,
/// and whether a geometry error aborted the inner loop early (the best
/// iterate so far is still returned).
struct ProxResult {
  double psi = 0.0;
  int iterations = 0;
  bool aborted = false;
};

/// Inexact prox of mu * d2 at g by subgradient descent on
/// psi(x) = 1/2 sum_j d(x_j, g_j)^2 + mu d2(x); returns the best iterate by
/// psi including the start, so psi(out) <= psi(g) always.
ProxResult prox_d2(const Manifold& m, double mu,
                   std::array<std::span<const double>, 3> g,
                   std::array<std::span<double>, 3> out, const ProxSchedule& sched);

/// Same scheme for mu * d11 on four points.
ProxResult prox_d11(const Manifold& m, double mu,
                    std::array<std::span<const double>, 4> g,
                    std::array<std::span<double>, 4> out, const ProxSchedule& sched);

/// psi(x) = 1/2 sum_j d(x_j, g_j)^2 + mu d2(x_1, x_2, x_3).
double objective_psi_d2(const Manifold& m, double mu,
                        std::array<std::span<const double>, 3> g,
                        std::array<std::span<const double>, 3> x);
/// psi over M^4 with the d11 coupling.
double objective_psi_d11(const Manifold& m, double mu,
                         std::array<std::span<const double>, 4> g,
                         std::array<std::span<const double>, 4> x);

// Value-level wrappers.
Point prox_data(const Manifold& m, double lambda, const Point& f, const Point& x);
std::pair<Point, Point> prox_dist_pair(const Manifold& m, double mu, const Point& x1,
                                       const Point& x2);
std::array<Point, 3> prox_d2(const Manifold& m, double mu,
                             const std::array<Point, 3>& g, const ProxSchedule& sched);
std::array<Point, 4> prox_d11(const Manifold& m, double mu,
                              const std::array<Point, 4>& g, const ProxSchedule& sched);

}  // namespace manitv
