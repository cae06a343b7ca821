// Proximal maps of the functional atoms.
#include "manitv/proximal.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "manitv/differences.hpp"
#include "manifolds_internal.hpp"

namespace manitv {

namespace {

void check_point_arg(const Manifold& m, const Point& p, const char* what) {
  if (p.coords.size() != static_cast<size_t>(m.ambient()))
    throw ValidationError(std::string(what) + ": wrong ambient size");
  m.validate_point(p.coords);
}

// Shared subgradient descent on psi(x) = 1/2 sum d(x_j, g_j)^2 + mu * D(x)
// with D = d2 (N = 3) or d11 (N = 4). Gradient and objective come out of
// one fused evaluation per iteration; the best iterate (including the
// start) is returned.
template <int N>
ProxResult subgradient_prox(const Manifold& m, double mu,
                            const std::array<std::span<const double>, N>& g,
                            const std::array<std::span<double>, N>& out,
                            const ProxSchedule& sched) {
  const size_t a = static_cast<size_t>(m.ambient());
  detail::SmallBuf<256> cur_buf, best_buf, grad_buf, log_buf;
  auto cur_all = cur_buf.get(N * static_cast<int>(a));
  auto best_all = best_buf.get(N * static_cast<int>(a));
  auto grad_all = grad_buf.get(N * static_cast<int>(a));
  auto log_all = log_buf.get(N * static_cast<int>(a));

  std::array<std::span<double>, N> cur, grad, lg;
  std::array<std::span<const double>, N> cur_c;
  for (int i = 0; i < N; ++i) {
    cur[i] = cur_all.subspan(static_cast<size_t>(i) * a, a);
    grad[i] = grad_all.subspan(static_cast<size_t>(i) * a, a);
    lg[i] = log_all.subspan(static_cast<size_t>(i) * a, a);
    std::memcpy(cur[i].data(), g[i].data(), a * sizeof(double));
    cur_c[i] = cur[i];
  }
  std::memcpy(best_all.data(), cur_all.data(), cur_all.size() * sizeof(double));

  ProxResult res;
  res.psi = std::numeric_limits<double>::quiet_NaN();
  double psi_best = std::numeric_limits<double>::infinity();
  const double tau0 = sched.tau0.value_or(1.0);
  bool stopped = false;

  for (int j = 1; j <= sched.max_inner_iters && !stopped; ++j) {
    double psi;
    try {
      double dval;
      if constexpr (N == 3)
        dval = grad_d2(m, cur_c[0], cur_c[1], cur_c[2], grad[0], grad[1], grad[2]);
      else
        dval = grad_d11(m, cur_c[0], cur_c[1], cur_c[2], cur_c[3], grad[0], grad[1],
                        grad[2], grad[3]);
      psi = mu * dval;
      for (int i = 0; i < N; ++i) {
        m.log(cur[i], g[i], lg[i]);
        psi += 0.5 * m.inner(cur[i], lg[i], lg[i]);
      }
    } catch (const GeometryDomainError&) {
      res.aborted = true;
      break;
    }
    res.iterations = j;
    if (psi < psi_best) {
      psi_best = psi;
      std::memcpy(best_all.data(), cur_all.data(), cur_all.size() * sizeof(double));
    }

    // -tau grad(psi) = tau * (log_x g - mu grad D)
    const double tau = tau0 / j;
    double step_sq = 0.0;
    for (int i = 0; i < N; ++i) {
      for (size_t c = 0; c < a; ++c) lg[i][c] = tau * (lg[i][c] - mu * grad[i][c]);
      if (sched.stop_tol > 0.0) step_sq += m.inner(cur[i], lg[i], lg[i]);
    }
    if (sched.stop_tol > 0.0 && std::sqrt(step_sq) <= sched.stop_tol) {
      stopped = true;
      break;
    }
    for (int i = 0; i < N; ++i) m.exp(cur[i], lg[i], cur[i]);
  }

  if (!res.aborted) {
    try {
      double psi = 0.0;
      if constexpr (N == 3)
        psi = mu * d2(m, cur_c[0], cur_c[1], cur_c[2]);
      else
        psi = mu * d11(m, cur_c[0], cur_c[1], cur_c[2], cur_c[3]);
      for (int i = 0; i < N; ++i) {
        const double d = m.dist(cur[i], g[i]);
        psi += 0.5 * d * d;
      }
      if (psi < psi_best) {
        psi_best = psi;
        std::memcpy(best_all.data(), cur_all.data(), cur_all.size() * sizeof(double));
      }
    } catch (const GeometryDomainError&) {
      res.aborted = true;
    }
  }

  for (int i = 0; i < N; ++i)
    std::memcpy(out[i].data(), best_all.data() + static_cast<size_t>(i) * a,
                a * sizeof(double));
  res.psi = psi_best;
  return res;
}

}  // namespace

void prox_data(const Manifold& m, double lambda, std::span<const double> f,
               std::span<const double> x, std::span<double> out) {
  // Exact minimizer of (1/2 lambda) d(x,.)^2 + 1/2 d(., f)^2.
  m.geodesic(x, f, lambda / (1.0 + lambda), out);
}

void prox_dist_pair(const Manifold& m, double mu, std::span<const double> x1,
                    std::span<const double> x2, std::span<double> out1,
                    std::span<double> out2) {
  const double d = m.dist(x1, x2);
  if (d <= 1e-14) {
    if (out1.data() != x1.data())
      std::memcpy(out1.data(), x1.data(), x1.size() * sizeof(double));
    if (out2.data() != x2.data())
      std::memcpy(out2.data(), x2.data(), x2.size() * sizeof(double));
    return;
  }
  const double t = std::min(mu, 0.5 * d) / d;
  // Both endpoints move toward each other; order matters if out1 aliases x1.
  detail::SmallBuf<64> buf;
  auto tmp = buf.get(m.ambient());
  m.geodesic(x2, x1, t, tmp);
  m.geodesic(x1, x2, t, out1);
  std::memcpy(out2.data(), tmp.data(), tmp.size() * sizeof(double));
}

ProxResult prox_d2(const Manifold& m, double mu,
                   std::array<std::span<const double>, 3> g,
                   std::array<std::span<double>, 3> out, const ProxSchedule& sched) {
  return subgradient_prox<3>(m, mu, g, out, sched);
}

ProxResult prox_d11(const Manifold& m, double mu,
                    std::array<std::span<const double>, 4> g,
                    std::array<std::span<double>, 4> out, const ProxSchedule& sched) {
  return subgradient_prox<4>(m, mu, g, out, sched);
}

double objective_psi_d2(const Manifold& m, double mu,
                        std::array<std::span<const double>, 3> g,
                        std::array<std::span<const double>, 3> x) {
  double psi = mu * d2(m, x[0], x[1], x[2]);
  for (int i = 0; i < 3; ++i) {
    const double d = m.dist(x[static_cast<size_t>(i)], g[static_cast<size_t>(i)]);
    psi += 0.5 * d * d;
  }
  return psi;
}

double objective_psi_d11(const Manifold& m, double mu,
                         std::array<std::span<const double>, 4> g,
                         std::array<std::span<const double>, 4> x) {
  double psi = mu * d11(m, x[0], x[1], x[2], x[3]);
  for (int i = 0; i < 4; ++i) {
    const double d = m.dist(x[static_cast<size_t>(i)], g[static_cast<size_t>(i)]);
    psi += 0.5 * d * d;
  }
  return psi;
}

Point prox_data(const Manifold& m, double lambda, const Point& f, const Point& x) {
  check_point_arg(m, f, "prox_data");
  check_point_arg(m, x, "prox_data");
  if (lambda <= 0.0) throw ValidationError("prox_data: lambda must be positive");
  Point out;
  out.coords.resize(static_cast<size_t>(m.ambient()));
  prox_data(m, lambda, f.coords, x.coords, out.coords);
  return out;
}

std::pair<Point, Point> prox_dist_pair(const Manifold& m, double mu, const Point& x1,
                                       const Point& x2) {
  check_point_arg(m, x1, "prox_dist_pair");
  check_point_arg(m, x2, "prox_dist_pair");
  if (mu <= 0.0) throw ValidationError("prox_dist_pair: mu must be positive");
  std::pair<Point, Point> out;
  out.first.coords.resize(static_cast<size_t>(m.ambient()));
  out.second.coords.resize(static_cast<size_t>(m.ambient()));
  prox_dist_pair(m, mu, x1.coords, x2.coords, out.first.coords, out.second.coords);
  return out;
}

std::array<Point, 3> prox_d2(const Manifold& m, double mu,
                             const std::array<Point, 3>& g, const ProxSchedule& sched) {
  for (const auto& p : g) check_point_arg(m, p, "prox_d2");
  std::array<Point, 3> out;
  std::array<std::span<const double>, 3> gs;
  std::array<std::span<double>, 3> os;
  for (int i = 0; i < 3; ++i) {
    out[static_cast<size_t>(i)].coords.resize(static_cast<size_t>(m.ambient()));
    gs[static_cast<size_t>(i)] = g[static_cast<size_t>(i)].coords;
    os[static_cast<size_t>(i)] = out[static_cast<size_t>(i)].coords;
  }
  prox_d2(m, mu, gs, os, sched);
  return out;
}

std::array<Point, 4> prox_d11(const Manifold& m, double mu,
                              const std::array<Point, 4>& g, const ProxSchedule& sched) {
  for (const auto& p : g) check_point_arg(m, p, "prox_d11");
  std::array<Point, 4> out;
  std::array<std::span<const double>, 4> gs;
  std::array<std::span<double>, 4> os;
  for (int i = 0; i < 4; ++i) {
    out[static_cast<size_t>(i)].coords.resize(static_cast<size_t>(m.ambient()));
    gs[static_cast<size_t>(i)] = g[static_cast<size_t>(i)].coords;
    os[static_cast<size_t>(i)] = out[static_cast<size_t>(i)].coords;
  }
  prox_d11(m, mu, gs, os, sched);
  return out;
}

}  // namespace manitv
