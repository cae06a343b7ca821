// Microbenchmarks for the geometry kernels that dominate solver time.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "manitv/differences.hpp"
#include "manitv/manifold.hpp"

namespace {

using namespace manitv;

struct Fixture {
  std::shared_ptr<const Manifold> m;
  std::vector<double> x, y, z, v, out;

  explicit Fixture(const ManifoldDescriptor& desc) : m(make_manifold(desc)) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n01(0.0, 1.0);
    const int a = m->ambient();
    x.resize(a);
    y.resize(a);
    z.resize(a);
    v.resize(a);
    out.resize(a);
    if (desc.kind() == ManifoldKind::Sphere) {
      auto draw = [&](std::vector<double>& p) {
        double s = 0.0;
        for (auto& c : p) {
          c = n01(rng);
          s += c * c;
        }
        for (auto& c : p) c /= std::sqrt(s);
      };
      draw(x);
      draw(y);
      draw(z);
    } else {  // spd
      const int r = desc.param();
      auto draw = [&](std::vector<double>& p) {
        std::vector<double> b(static_cast<size_t>(r) * r);
        for (auto& c : b) c = n01(rng);
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < r; ++j) {
            double s = 0.0;
            for (int k = 0; k < r; ++k) s += b[r * i + k] * b[r * j + k];
            p[static_cast<size_t>(r * i + j)] = 0.35 * s + (i == j ? 0.5 : 0.0);
          }
      };
      draw(x);
      draw(y);
      draw(z);
    }
    m->log(x, y, v);
  }
};

void BM_log(benchmark::State& state, const ManifoldDescriptor& desc) {
  Fixture f(desc);
  for (auto _ : state) {
    f.m->log(f.x, f.y, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
}

void BM_exp(benchmark::State& state, const ManifoldDescriptor& desc) {
  Fixture f(desc);
  for (auto _ : state) {
    f.m->exp(f.x, f.v, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
}

void BM_transport(benchmark::State& state, const ManifoldDescriptor& desc) {
  Fixture f(desc);
  for (auto _ : state) {
    f.m->transport(f.x, f.y, f.v, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
}

void BM_grad_d2(benchmark::State& state, const ManifoldDescriptor& desc) {
  Fixture f(desc);
  std::vector<double> gx(f.x.size()), gy(f.x.size()), gz(f.x.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(grad_d2(*f.m, f.x, f.y, f.z, gx, gy, gz));
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_log, sphere2, manitv::ManifoldDescriptor::sphere(2));
BENCHMARK_CAPTURE(BM_exp, sphere2, manitv::ManifoldDescriptor::sphere(2));
BENCHMARK_CAPTURE(BM_transport, sphere2, manitv::ManifoldDescriptor::sphere(2));
BENCHMARK_CAPTURE(BM_grad_d2, sphere2, manitv::ManifoldDescriptor::sphere(2));
BENCHMARK_CAPTURE(BM_log, spd3, manitv::ManifoldDescriptor::spd(3));
BENCHMARK_CAPTURE(BM_exp, spd3, manitv::ManifoldDescriptor::spd(3));
BENCHMARK_CAPTURE(BM_transport, spd3, manitv::ManifoldDescriptor::spd(3));
BENCHMARK_CAPTURE(BM_grad_d2, spd3, manitv::ManifoldDescriptor::spd(3));
