#include <benchmark/benchmark.h>

#include "surfhelm/driver.hpp"

namespace {

using namespace surfhelm;

const LevelSetSurface& sphere() {
  static const LevelSetSurface s = LevelSetSurface::sphere(Vec3::Zero(), 0.5);
  return s;
}

void BM_BuildAndCut(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto mesh = build_background_mesh(Box::cube(1.5), n);
    const auto ls = interpolate_level_set(mesh, sphere());
    const auto active = extract_active_mesh(ls);
    auto cells = cut_active_mesh(active, ls);
    benchmark::DoNotOptimize(cells.data());
  }
}
BENCHMARK(BM_BuildAndCut)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_AssembleSystem(benchmark::State& state) {
  const Discretization disc(sphere(), Box::cube(1.5), static_cast<int>(state.range(0)));
  const ManufacturedCase mms{AmbientScalarField::preset("cubic"), sphere(), 1.0};
  const auto f = mms.forcing_function();
  const auto params = StabilizationParams::stabilized(1.0);
  for (auto _ : state) {
    auto sys = assemble_system(disc.active(), disc.cells(), params, f, sphere());
    benchmark::DoNotOptimize(sys.rhs.data());
  }
  state.counters["ndof"] = static_cast<double>(disc.active().num_dofs());
}
BENCHMARK(BM_AssembleSystem)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const Discretization disc(sphere(), Box::cube(1.5), static_cast<int>(state.range(0)));
  const ManufacturedCase mms{AmbientScalarField::preset("cubic"), sphere(), 1.0};
  const auto sys = assemble_system(disc.active(), disc.cells(), StabilizationParams::stabilized(1.0),
                                   mms.forcing_function(), sphere());
  for (auto _ : state) {
    auto r = solve(sys);
    benchmark::DoNotOptimize(r.solution.data());
  }
  state.counters["ndof"] = static_cast<double>(sys.dim());
}
BENCHMARK(BM_Solve)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
