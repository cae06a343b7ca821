// Functional evaluation, the 15/6-way splitting, and the inexact cyclic
// proximal point driver.
#include "manitv/cppa.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "manitv/datagen.hpp"
#include "manitv/differences.hpp"

namespace manitv {

namespace {

long flat_index(int i, int j, int cols) { return static_cast<long>(i) * cols + j; }

std::string pixel_name(std::int32_t flat, int cols) {
  std::ostringstream os;
  os << "(" << flat / cols + 1 << "," << flat % cols + 1 << ")";
  return os.str();
}

void check_disjoint(const SplitGroup& g, long pixel_count) {
  std::vector<char> seen(static_cast<size_t>(pixel_count), 0);
  for (std::int32_t idx : g.tuples) {
    if (seen[static_cast<size_t>(idx)])
      throw Error("split group is not index-disjoint");
    seen[static_cast<size_t>(idx)] = 1;
  }
}

}  // namespace

SplitPlan build_split(int rows, int cols) {
  if (rows < 1 || cols < 1) throw ValidationError("split needs a nonempty grid");
  SplitPlan plan;
  plan.rows = rows;
  plan.cols = cols;
  const long nm = static_cast<long>(rows) * cols;

  SplitGroup data{AtomKind::Data, 0, 1, {}};
  data.tuples.resize(static_cast<size_t>(nm));
  std::iota(data.tuples.begin(), data.tuples.end(), 0);
  plan.groups.push_back(std::move(data));

  // First differences, even/odd classes per direction.
  for (int nu = 0; nu < 2; ++nu) {
    SplitGroup g{AtomKind::DistPair, 0, 2, {}};
    for (int i = nu; i + 1 <= rows - 1; i += 2)
      for (int j = 0; j < cols; ++j) {
        g.tuples.push_back(static_cast<std::int32_t>(flat_index(i, j, cols)));
        g.tuples.push_back(static_cast<std::int32_t>(flat_index(i + 1, j, cols)));
      }
    plan.groups.push_back(std::move(g));
  }
  if (cols > 1) {
    for (int nu = 0; nu < 2; ++nu) {
      SplitGroup g{AtomKind::DistPair, 1, 2, {}};
      for (int i = 0; i < rows; ++i)
        for (int j = nu; j + 1 <= cols - 1; j += 2) {
          g.tuples.push_back(static_cast<std::int32_t>(flat_index(i, j, cols)));
          g.tuples.push_back(static_cast<std::int32_t>(flat_index(i, j + 1, cols)));
        }
      plan.groups.push_back(std::move(g));
    }
  }

  // Second differences, stride-3 offset classes per direction.
  for (int nu = 0; nu < 3; ++nu) {
    SplitGroup g{AtomKind::D2Triple, 0, 3, {}};
    for (int i = nu; i + 2 <= rows - 1; i += 3)
      for (int j = 0; j < cols; ++j)
        for (int k = 0; k < 3; ++k)
          g.tuples.push_back(static_cast<std::int32_t>(flat_index(i + k, j, cols)));
    plan.groups.push_back(std::move(g));
  }
  if (cols > 1) {
    for (int nu = 0; nu < 3; ++nu) {
      SplitGroup g{AtomKind::D2Triple, 1, 3, {}};
      for (int i = 0; i < rows; ++i)
        for (int j = nu; j + 2 <= cols - 1; j += 3)
          for (int k = 0; k < 3; ++k)
            g.tuples.push_back(static_cast<std::int32_t>(flat_index(i, j + k, cols)));
      plan.groups.push_back(std::move(g));
    }

    // Mixed differences, 2x2 blocks with stride 2 in both axes; the quad
    // order pairs the two diagonals of the block, which makes the atom the
    // mixed second difference (it vanishes on affine ramps). Group order is
    // nu3-fast to match the enumeration E_12 .. E_15.
    for (int nu4 = 0; nu4 < 2; ++nu4)
      for (int nu3 = 0; nu3 < 2; ++nu3) {
        SplitGroup g{AtomKind::D11Quad, 2, 4, {}};
        for (int i = nu3; i + 1 <= rows - 1; i += 2)
          for (int j = nu4; j + 1 <= cols - 1; j += 2) {
            g.tuples.push_back(static_cast<std::int32_t>(flat_index(i, j, cols)));
            g.tuples.push_back(static_cast<std::int32_t>(flat_index(i, j + 1, cols)));
            g.tuples.push_back(static_cast<std::int32_t>(flat_index(i + 1, j + 1, cols)));
            g.tuples.push_back(static_cast<std::int32_t>(flat_index(i + 1, j, cols)));
          }
        plan.groups.push_back(std::move(g));
      }
  }

  for (const auto& g : plan.groups) check_disjoint(g, nm);
  return plan;
}

double functional_value(const ManifoldImage& u, const ManifoldImage& f,
                        const FunctionalParams& p) {
  if (!u.same_shape(f))
    throw ValidationError("functional_value: images have different shapes");
  const Manifold& m = u.manifold();
  const int rows = u.rows(), cols = u.cols();

  double acc = 0.0;
  for (long q = 0; q < u.pixel_count(); ++q) {
    const double d = m.dist(f.pixel(q), u.pixel(q));
    acc += 0.5 * d * d;
  }
  if (p.alpha[0] != 0.0) {
    double s = 0.0;
    for (int i = 0; i + 1 < rows; ++i)
      for (int j = 0; j < cols; ++j) s += m.dist(u.pixel(i, j), u.pixel(i + 1, j));
    acc += p.alpha[0] * s;
  }
  if (p.alpha[1] != 0.0 && cols > 1) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j + 1 < cols; ++j) s += m.dist(u.pixel(i, j), u.pixel(i, j + 1));
    acc += p.alpha[1] * s;
  }
  if (p.beta[0] != 0.0) {
    double s = 0.0;
    for (int i = 1; i + 1 < rows; ++i)
      for (int j = 0; j < cols; ++j)
        s += d2(m, u.pixel(i - 1, j), u.pixel(i, j), u.pixel(i + 1, j));
    acc += p.beta[0] * s;
  }
  if (p.beta[1] != 0.0 && cols > 1) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i)
      for (int j = 1; j + 1 < cols; ++j)
        s += d2(m, u.pixel(i, j - 1), u.pixel(i, j), u.pixel(i, j + 1));
    acc += p.beta[1] * s;
  }
  if (p.beta[2] != 0.0 && cols > 1) {
    // Mixed differences pair the diagonals of each 2x2 block.
    double s = 0.0;
    for (int i = 0; i + 1 < rows; ++i)
      for (int j = 0; j + 1 < cols; ++j)
        s += d11(m, u.pixel(i, j), u.pixel(i, j + 1), u.pixel(i + 1, j + 1),
                 u.pixel(i + 1, j));
    acc += p.beta[2] * s;
  }
  return acc;
}

namespace {

struct GroupError {
  std::atomic<bool> set{false};
  std::string message;
  std::int32_t first_pixel = 0;
};

void record_error(GroupError& err, const char* what, std::int32_t pixel) {
  bool expected = false;
  if (err.set.compare_exchange_strong(expected, true)) {
    err.message = what;
    err.first_pixel = pixel;
  }
}

}  // namespace

DenoiseResult cppa_run(const ManifoldImage& f, const FunctionalParams& p,
                       const SolverConfig& cfg) {
  if (cfg.lambda0 <= 0.0) throw ValidationError("cppa: lambda0 must be positive");
  for (double w : p.alpha)
    if (w < 0.0) throw ValidationError("cppa: alpha weights must be nonnegative");
  for (double w : p.beta)
    if (w < 0.0) throw ValidationError("cppa: beta weights must be nonnegative");

  const Manifold& m = f.manifold();
  const int cols = f.cols();
  const SplitPlan plan = build_split(f.rows(), cols);
  const int cycles = cfg.effective_cycles(cols);

  DenoiseResult res{f, {}};
  ManifoldImage& u = res.image;
  Diagnostics& diag = res.diagnostics;
  diag.prox_applications.assign(static_cast<size_t>(f.pixel_count()), 0);
  diag.inner_iterations = cfg.prox_schedule.max_inner_iters;
  diag.cycles.reserve(static_cast<size_t>(cycles));

  int nthreads = cfg.threads;
#ifdef _OPENMP
  if (nthreads <= 0) nthreads = omp_get_max_threads();
#else
  nthreads = 1;
#endif

  const auto t_start = std::chrono::steady_clock::now();
  for (int k = 1; k <= cycles; ++k) {
    const double lambda = cfg.lambda0 / k;
    const ProxSchedule& sched = cfg.prox_schedule;
    long aborted = 0;

    for (size_t gi = 0; gi < plan.groups.size(); ++gi) {
      const SplitGroup& group = plan.groups[gi];
      const long n = group.tuple_count();
      GroupError err;

      switch (group.kind) {
        case AtomKind::Data: {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads)
#endif
          for (long t = 0; t < n; ++t) {
            if (err.set.load(std::memory_order_relaxed)) continue;
            const std::int32_t q = group.tuples[static_cast<size_t>(t)];
            try {
              prox_data(m, lambda, f.pixel(q), u.pixel(q), u.pixel(q));
            } catch (const GeometryDomainError& e) {
              record_error(err, e.what(), q);
            }
          }
          break;
        }
        case AtomKind::DistPair: {
          const double mu = lambda * p.alpha[static_cast<size_t>(group.weight_index)];
          if (mu == 0.0) break;  // identity prox
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads)
#endif
          for (long t = 0; t < n; ++t) {
            if (err.set.load(std::memory_order_relaxed)) continue;
            const std::int32_t a = group.tuples[static_cast<size_t>(2 * t)];
            const std::int32_t b = group.tuples[static_cast<size_t>(2 * t + 1)];
            try {
              prox_dist_pair(m, mu, u.pixel(a), u.pixel(b), u.pixel(a), u.pixel(b));
            } catch (const GeometryDomainError& e) {
              record_error(err, e.what(), a);
            }
          }
          break;
        }
        case AtomKind::D2Triple: {
          const double mu = lambda * p.beta[static_cast<size_t>(group.weight_index)];
          if (mu == 0.0) break;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads) reduction(+ : aborted)
#endif
          for (long t = 0; t < n; ++t) {
            if (err.set.load(std::memory_order_relaxed)) continue;
            const std::int32_t* q = group.tuples.data() + 3 * t;
            try {
              const ProxResult r = prox_d2(
                  m, mu, {u.pixel(q[0]), u.pixel(q[1]), u.pixel(q[2])},
                  {u.pixel(q[0]), u.pixel(q[1]), u.pixel(q[2])}, sched);
              if (r.aborted) aborted += 1;
            } catch (const GeometryDomainError& e) {
              record_error(err, e.what(), q[0]);
            }
          }
          break;
        }
        case AtomKind::D11Quad: {
          const double mu = lambda * p.beta[static_cast<size_t>(group.weight_index)];
          if (mu == 0.0) break;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads) reduction(+ : aborted)
#endif
          for (long t = 0; t < n; ++t) {
            if (err.set.load(std::memory_order_relaxed)) continue;
            const std::int32_t* q = group.tuples.data() + 4 * t;
            try {
              const ProxResult r = prox_d11(
                  m, mu,
                  {u.pixel(q[0]), u.pixel(q[1]), u.pixel(q[2]), u.pixel(q[3])},
                  {u.pixel(q[0]), u.pixel(q[1]), u.pixel(q[2]), u.pixel(q[3])}, sched);
              if (r.aborted) aborted += 1;
            } catch (const GeometryDomainError& e) {
              record_error(err, e.what(), q[0]);
            }
          }
          break;
        }
      }

      if (err.set.load()) {
        std::ostringstream os;
        os << "geometry domain error in cycle " << k << ", sub-functional " << gi + 1
           << ", tuple at pixel " << pixel_name(err.first_pixel, cols) << ": "
           << err.message;
        throw GeometryDomainError(os.str());
      }
      for (std::int32_t q : group.tuples)
        diag.prox_applications[static_cast<size_t>(q)] += 1;
    }

    CycleStats stats;
    stats.cycle = k;
    stats.aborted_proxes = aborted;
    try {
      stats.functional = functional_value(u, f, p);
    } catch (const GeometryDomainError&) {
      stats.functional = std::numeric_limits<double>::quiet_NaN();
    }
    stats.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    diag.cycles.push_back(stats);
  }
  return res;
}

GridSearchResult grid_search(const ManifoldImage& noisy, const ManifoldImage& clean,
                             const std::vector<double>& alphas,
                             const std::vector<double>& betas,
                             const SolverConfig& cfg) {
  if (alphas.empty() || betas.empty())
    throw ValidationError("grid_search: parameter grids must be nonempty");
  if (!noisy.same_shape(clean))
    throw ValidationError("grid_search: images have different shapes");

  GridSearchResult res;
  res.best.mean_error = std::numeric_limits<double>::infinity();
  for (double a : alphas) {
    for (double b : betas) {
      const DenoiseResult run = cppa_run(noisy, FunctionalParams::isotropic(a, b), cfg);
      GridSearchEntry entry{a, b, mean_error(run.image, clean)};
      res.table.push_back(entry);
      if (entry.mean_error < res.best.mean_error) res.best = entry;
    }
  }
  return res;
}

}  // namespace manitv
