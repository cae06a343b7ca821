// The denoising functional, its cyclic splitting, and the inexact cyclic
// proximal point driver.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "manitv/image.hpp"
#include "manitv/proximal.hpp"

namespace manitv {

/// Regularization weights: alpha for first differences (vertical,
/// horizontal), beta for second differences (vertical, horizontal, mixed).
/// For signals (M = 1) alpha[1], beta[1] and beta[2] are ignored.
struct FunctionalParams {
  std::array<double, 2> alpha{0.0, 0.0};
  std::array<double, 3> beta{0.0, 0.0, 0.0};

  static FunctionalParams isotropic(double a, double b) {
    return FunctionalParams{{a, a}, {b, b, b}};
  }
};

/// Solver configuration. The outer steps lambda_k = lambda0 / k (k from 1)
/// satisfy sum lambda_k = inf, sum lambda_k^2 < inf.
struct SolverConfig {
  double lambda0 = 1.5707963267948966;  // pi/2
  /// Outer cycles; 0 picks the default (1000 for signals, 400 for images).
  int cycles = 0;
  ProxSchedule prox_schedule;
  std::uint64_t seed = 0;
  /// Worker threads for the per-group tuple proxes; 0 = hardware default.
  int threads = 0;

  int effective_cycles(int cols) const { return cycles > 0 ? cycles : (cols == 1 ? 1000 : 400); }
};

enum class AtomKind { Data, DistPair, D2Triple, D11Quad };

/// One sub-functional of the splitting: an atom type, the weight it uses
/// (index into alpha/beta), and the index-disjoint pixel tuples it touches.
struct SplitGroup {
  AtomKind kind;
  int weight_index = 0;  // alpha[i] for DistPair, beta[i] for D2/D11
  int tuple_size = 1;
  std::vector<std::int32_t> tuples;  // flat pixel indices, tuple_size per tuple

  long tuple_count() const { return static_cast<long>(tuples.size()) / tuple_size; }
};

/// Ordered splitting of the functional: data term, 2+2 even/odd first
/// difference classes, 3+3 second difference offset classes, 4 mixed
/// classes. Exactly 15 groups when M > 1 and 6 when M = 1; within a group
/// every pixel appears at most once.
struct SplitPlan {
  int rows = 0, cols = 0;
  std::vector<SplitGroup> groups;
};

SplitPlan build_split(int rows, int cols);

/// E(u) = 1/2 sum d(f,u)^2 + alpha-weighted first differences +
/// beta-weighted d2/d11 sums. Throws ValidationError on shape mismatch.
double functional_value(const ManifoldImage& u, const ManifoldImage& f,
                        const FunctionalParams& p);

struct CycleStats {
  int cycle = 0;
  double functional = 0.0;
  double elapsed_seconds = 0.0;  // cumulative
  long aborted_proxes = 0;       // inner loops cut short by geometry errors
};

struct Diagnostics {
  std::vector<CycleStats> cycles;
  /// Proximal map applications per pixel over the whole run.
  std::vector<long> prox_applications;
  int inner_iterations = 0;  // schedule actually used
};

struct DenoiseResult {
  ManifoldImage image;
  Diagnostics diagnostics;
};

/// Inexact cyclic proximal point algorithm on the split plan, starting from
/// u = f. Within a group the tuple proxes touch disjoint pixels and run in
/// parallel; groups are separated by barriers. Identical inputs and seed
/// give bit-identical outputs. Geometry domain errors are reported with the
/// offending pixel tuple and cycle.
DenoiseResult cppa_run(const ManifoldImage& f, const FunctionalParams& p,
                       const SolverConfig& cfg);

struct GridSearchEntry {
  double alpha = 0.0, beta = 0.0;
  double mean_error = 0.0;
};

struct GridSearchResult {
  GridSearchEntry best;
  std::vector<GridSearchEntry> table;
};

/// Runs the denoiser for every (alpha, beta) pair of the grids (isotropic
/// weights) and returns the argmin of the mean error against `clean` plus
/// the full table.
GridSearchResult grid_search(const ManifoldImage& noisy, const ManifoldImage& clean,
                             const std::vector<double>& alphas,
                             const std::vector<double>& betas,
                             const SolverConfig& cfg);

}  // namespace manitv
