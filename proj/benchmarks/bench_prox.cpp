// Benchmarks of the inexact proxes and one full solver cycle.
#include <benchmark/benchmark.h>

#include "manitv/cppa.hpp"
#include "manitv/datagen.hpp"
#include "manitv/proximal.hpp"

namespace {

using namespace manitv;

void BM_prox_d2_sphere(benchmark::State& state) {
  auto m = make_manifold(ManifoldDescriptor::sphere(2));
  const ManifoldImage sig = gen_lemniscate(8);
  ProxSchedule sched;
  sched.max_inner_iters = static_cast<int>(state.range(0));
  std::vector<double> o0(3), o1(3), o2(3);
  for (auto _ : state) {
    const ProxResult r = prox_d2(
        *m, 0.5, {sig.pixel(0, 0), sig.pixel(1, 0), sig.pixel(2, 0)},
        {std::span<double>(o0), std::span<double>(o1), std::span<double>(o2)}, sched);
    benchmark::DoNotOptimize(r.psi);
  }
}

void BM_prox_d11_spd(benchmark::State& state) {
  auto m = make_manifold(ManifoldDescriptor::spd(3));
  const ManifoldImage img = gen_spd_image(4);
  ProxSchedule sched;
  sched.max_inner_iters = static_cast<int>(state.range(0));
  std::vector<double> o0(9), o1(9), o2(9), o3(9);
  for (auto _ : state) {
    const ProxResult r = prox_d11(
        *m, 0.05,
        {img.pixel(0, 0), img.pixel(1, 0), img.pixel(0, 1), img.pixel(1, 1)},
        {std::span<double>(o0), std::span<double>(o1), std::span<double>(o2),
         std::span<double>(o3)},
        sched);
    benchmark::DoNotOptimize(r.psi);
  }
}

void BM_full_cycle_s2_field(benchmark::State& state) {
  const ManifoldImage clean = gen_s2_field(static_cast<int>(state.range(0)));
  const ManifoldImage noisy =
      add_noise(clean, {NoiseModel::GaussianTangent, 0.28, 1});
  SolverConfig cfg;
  cfg.cycles = 1;
  cfg.threads = 1;
  for (auto _ : state) {
    const DenoiseResult r = cppa_run(noisy, FunctionalParams::isotropic(0.0, 8.6), cfg);
    benchmark::DoNotOptimize(r.diagnostics.cycles.back().functional);
  }
}

}  // namespace

BENCHMARK(BM_prox_d2_sphere)->Arg(10)->Arg(50);
BENCHMARK(BM_prox_d11_spd)->Arg(10)->Arg(50);
BENCHMARK(BM_full_cycle_s2_field)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
