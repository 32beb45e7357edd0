#include <benchmark/benchmark.h>

#include <vector>

#include "rtm/forward.hpp"
#include "rtm/imaging.hpp"
#include "rtm/msr.hpp"
#include "rtm/reference.hpp"
#include "rtm/specfun.hpp"

using namespace rtm;

namespace {

forward::ScattererModel kite(forward::Physics physics = forward::Dirichlet{}) {
  forward::ScattererModel m;
  m.curves = {geometry::Kite{{}, 2.0}};
  m.physics = std::move(physics);
  return m;
}

void BM_BesselJY01(benchmark::State& state) {
  double x = 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::bessel_jy01(x));
    x = x < 60.0 ? x + 0.731 : 0.37;
  }
}
BENCHMARK(BM_BesselJY01);

void BM_BesselSequence(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  std::vector<double> j(order + 1);
  std::vector<double> y(order + 1);
  for (auto _ : state) {
    specfun::bessel_jy_sequence(order, 17.3, j, y);
    benchmark::DoNotOptimize(j.data());
  }
}
BENCHMARK(BM_BesselSequence)->Arg(16)->Arg(128);

// Assembly plus LU for the kite at 10 points per wavelength.
void BM_BoundarySolver(benchmark::State& state) {
  const double k = kTwoPi / (state.range(0) / 100.0);
  const auto model = state.range(1) == 0 ? kite() : kite(forward::Impedance{1.0});
  for (auto _ : state) {
    const forward::Solver solver(model, k, Parallelism{1});
    benchmark::DoNotOptimize(&solver);
  }
}
BENCHMARK(BM_BoundarySolver)->Args({100, 0})->Args({50, 0})->Args({50, 1})->Unit(benchmark::kMillisecond);

void BM_SynthesizeMsr(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const geometry::AcquisitionGeometry ring{10.0, 10.0, n, n, {}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(msr::synthesize_msr(kite(), ring, kTwoPi, Parallelism{1}));
  }
}
BENCHMARK(BM_SynthesizeMsr)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Correlate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const geometry::AcquisitionGeometry ring{10.0, 10.0, 64, 64, {}};
  const auto data = msr::synthesize_msr(kite(), ring, kTwoPi);
  const geometry::SamplingGrid grid{-6.0, 6.0, -6.0, 6.0, n, n};
  for (auto _ : state) {
    benchmark::DoNotOptimize(imaging::correlate(data, grid, Parallelism{1}));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Correlate)->Arg(51)->Arg(101)->Unit(benchmark::kMillisecond);

void BM_LimitImage(benchmark::State& state) {
  const geometry::SamplingGrid grid{-6.0, 6.0, -6.0, 6.0, 51, 51};
  reference::ReferenceOptions opts;
  opts.par = Parallelism{1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::theorem_image(kite(), grid, kTwoPi, opts));
  }
}
BENCHMARK(BM_LimitImage)->Unit(benchmark::kMillisecond);

}  // namespace

// The distro's benchmark_main archive carries LTO bytecode from another compiler release.
BENCHMARK_MAIN();
