#include <benchmark/benchmark.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "shelab/grid.hpp"
#include "shelab/kernels.hpp"
#include "shelab/moments.hpp"
#include "shelab/noise.hpp"
#include "shelab/spde.hpp"

using namespace shelab;

namespace {

GridSpec grid_with_cells(std::size_t cells) {
  GridSpec g;
  g.dx = 0.05;
  g.half_width = 0.5 * g.dx * static_cast<double>(cells);
  g.dt = 1e-3;
  g.t_max = 1.0;
  return g;
}

void BM_NoiseSlice(benchmark::State& state) {
  const GridSpec g = grid_with_cells(static_cast<std::size_t>(state.range(0)));
  const NoiseSource noise(42, g);
  std::vector<double> out(g.n_cells());
  std::uint64_t step_no = 0;
  for (auto _ : state) {
    noise.slice(0, step_no++, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * g.n_cells());
}

void BM_DiffusionSolve(benchmark::State& state) {
  const GridSpec g = grid_with_cells(static_cast<std::size_t>(state.range(0)));
  const DiffusionSolver solver(g);
  std::vector<double> u(g.n_cells(), 1.0);
  u[g.n_cells() / 2] = 2.0;
  for (auto _ : state) {
    solver.solve_in_place(u);
    benchmark::DoNotOptimize(u.data());
  }
  state.SetItemsProcessed(state.iterations() * g.n_cells());
}

// One splitting step on a freshly reset field; the reset fill is included
// but is cheap next to the solve and the per-cell exp.
void BM_FieldStep(benchmark::State& state) {
  const GridSpec g = grid_with_cells(static_cast<std::size_t>(state.range(0)));
  const DiffusionSolver solver(g);
  const NoiseSource noise(42, g);
  std::vector<double> xi(g.n_cells());
  noise.slice(0, 0, xi);
  FieldState field{0.0, std::vector<double>(g.n_cells(), 1.0)};
  for (auto _ : state) {
    std::fill(field.values.begin(), field.values.end(), 1.0);
    field.t = 0.0;
    step(field, xi, 1.0, g, solver);
    benchmark::DoNotOptimize(field.values.data());
  }
  state.SetItemsProcessed(state.iterations() * g.n_cells());
}

// End-to-end cost of one Monte Carlo sample: noise generation plus stepping
// to t = 0.05 (fifty steps at the default dt).
void BM_FlatSample(benchmark::State& state) {
  const GridSpec g = grid_with_cells(static_cast<std::size_t>(state.range(0)));
  Simulator sim(g, 1.0, 42);
  std::uint64_t sample = 0;
  for (auto _ : state) {
    FieldState field = sim.flat_state();
    sim.advance(field, sample++, 0.05);
    benchmark::DoNotOptimize(field.values.data());
  }
  state.SetItemsProcessed(state.iterations() * g.n_cells() * 50);
}

void BM_Erfcx(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(erfcx(x));
    x += 0.25;
    if (x > 8.0) x = 0.0;
  }
}

void BM_ProxyClosedForm(benchmark::State& state) {
  double x = -4.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(proxy_integral(1.0, x, ProxyMethod::closed_form));
    x += 0.125;
    if (x > 4.0) x = -4.0;
  }
}

void BM_ProxyQuadrature(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(proxy_integral(1.0, 1.5, ProxyMethod::quadrature));
}

void BM_M2Closed(benchmark::State& state) {
  double tau = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m2_closed(1.0, tau));
    tau += 0.1;
    if (tau > 4.0) tau = 0.1;
  }
}

void BM_VolterraBridge(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const MomentCurve curve = solve_volterra_bridge(1.0, 1.0, n);
    benchmark::DoNotOptimize(curve.value.data());
  }
  state.SetComplexityN(n);
}

}  // namespace

BENCHMARK(BM_NoiseSlice)->Arg(320);
BENCHMARK(BM_DiffusionSolve)->Arg(320);
BENCHMARK(BM_FieldStep)->Arg(320);
BENCHMARK(BM_FlatSample)->Arg(320);
BENCHMARK(BM_Erfcx);
BENCHMARK(BM_ProxyClosedForm);
BENCHMARK(BM_ProxyQuadrature);
BENCHMARK(BM_M2Closed);
BENCHMARK(BM_VolterraBridge)->Arg(256)->Arg(1024)->Complexity(benchmark::oNSquared);

BENCHMARK_MAIN();
