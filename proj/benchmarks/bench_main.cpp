// Microbenchmarks for the hot paths: sine synthesis/analysis, one Duhamel
// step over a full band, and one pseudo-spectral Navier-Stokes step.

#include <benchmark/benchmark.h>

#include "pclab/evolve.hpp"
#include "pclab/field.hpp"
#include "pclab/ns.hpp"
#include "pclab/rng.hpp"
#include "pclab/source.hpp"
#include "pclab/transform.hpp"

using namespace pclab;

namespace {

BoxDomain box1(int n) {
  BoxDomain d;
  d.dims = 1;
  d.lengths = {M_PI, 1.0, 1.0};
  d.grid_points = {n, 4, 4};
  return d;
}

SpectralField random_band(const BoxDomain& d, const std::array<int, 3>& cap, uint64_t seed) {
  SpectralField f = zero_field(d, cap);
  Rng rng(seed);
  for (double& c : f.coeffs) c = rng.uniform(-1.0, 1.0);
  return f;
}

void bm_synthesis_1d(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SpectralField f = random_band(box1(n), {n / 4, 1, 1}, 1);
  for (auto _ : state) {
    NodalField g = from_spectral(f);
    benchmark::DoNotOptimize(g.values.data());
  }
}
BENCHMARK(bm_synthesis_1d)->Arg(256)->Arg(1024);

void bm_analysis_2d(benchmark::State& state) {
  BoxDomain d;
  d.dims = 2;
  d.lengths = {M_PI, M_PI, 1.0};
  const int n = static_cast<int>(state.range(0));
  d.grid_points = {n, n, 4};
  const SpectralField f = random_band(d, {n / 4, n / 4, 1}, 2);
  const NodalField g = from_spectral(f);
  for (auto _ : state) {
    SpectralField h = to_spectral(g, f.mode_cap);
    benchmark::DoNotOptimize(h.coeffs.data());
  }
}
BENCHMARK(bm_analysis_2d)->Arg(64)->Arg(128);

void bm_duhamel_trajectory(benchmark::State& state) {
  const BoxDomain d = box1(256);
  SpectralField y0 = zero_field(d, {64, 1, 1});
  y0.coeffs[0] = 1.0;
  SourceSpec u;
  u.kind = SourceSpec::Kind::constant;
  u.value = 1.0;
  const TimeGrid grid{1.0, static_cast<int>(state.range(0))};
  for (auto _ : state) {
    Trajectory tr = parabolic_evolve(y0, u, grid, Method::duhamel);
    benchmark::DoNotOptimize(tr.node(grid.steps));
  }
}
BENCHMARK(bm_duhamel_trajectory)->Arg(64)->Arg(256);

void bm_ns_step(benchmark::State& state) {
  ns::PeriodicBox box;
  box.dims = 3;
  box.K = static_cast<int>(state.range(0));
  Rng rng(3);
  const ns::DivFreeField y0 = ns::random_field(box, rng);
  const TimeGrid grid{0.01, 1};  // a single RK4 step
  for (auto _ : state) {
    ns::GalerkinTrajectory tr = ns::ns_evolve(y0, 0.5, grid);
    benchmark::DoNotOptimize(tr.coeffs.data());
  }
}
BENCHMARK(bm_ns_step)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
