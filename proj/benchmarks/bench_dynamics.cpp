#include <benchmark/benchmark.h>

#include <cmath>

#include "qbat/dynamics.hpp"
#include "qbat/observables.hpp"

namespace {

using namespace qbat;

ChargerParams bench_charger() {
  ChargerParams c;
  c.Delta = 0.1;
  c.delta = 0.01;
  c.Omega = 0.005;
  c.gamma_hg = 0.1;
  c.gamma_eg = 0.01;
  c.gamma_he = 0.01;
  c.g = std::sqrt(std::abs(c.detuning_product()));
  return c;
}

ComplexMatrix ground_composite(int battery_dim) {
  ComplexMatrix rho = ComplexMatrix::Zero(3 * battery_dim, 3 * battery_dim);
  rho(0, 0) = 1.0;
  return rho;
}

void BM_composite_rhs_structured(benchmark::State& state) {
  const auto b =
      BatteryModel::uniform_ladder(static_cast<int>(state.range(0)), 1.0);
  const CompositeRhs rhs(b, bench_charger());
  const ComplexMatrix rho = ground_composite(b.dim);
  ComplexMatrix out;
  for (auto _ : state) {
    rhs(0.0, rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_composite_rhs_structured)->Arg(10)->Arg(50);

void BM_composite_rhs_dense(benchmark::State& state) {
  const auto b =
      BatteryModel::uniform_ladder(static_cast<int>(state.range(0)), 1.0);
  const LindbladGenerator gen = composite_generator(b, bench_charger());
  const ComplexMatrix rho = ground_composite(b.dim);
  for (auto _ : state) {
    ComplexMatrix out = lindblad_rhs(gen, rho);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_composite_rhs_dense)->Arg(10)->Arg(50);

void BM_propagate_composite(benchmark::State& state) {
  const auto b = BatteryModel::uniform_ladder(50, 1.0);
  const auto c = bench_charger();
  const std::vector<double> grid = {0.0, 500.0, 1000.0};
  for (auto _ : state) {
    Trajectory traj = propagate_composite(
        b, c, DensityMatrix::level_projector(b.dim, 0), grid);
    benchmark::DoNotOptimize(traj.states.back().data());
  }
}
BENCHMARK(BM_propagate_composite)->Unit(benchmark::kMillisecond);

void BM_propagate_effective_chain(benchmark::State& state) {
  const auto b = BatteryModel::uniform_ladder(50, 1.0);
  const LindbladGenerator gen =
      effective_battery_generator(b, bench_charger());
  const DensityMatrix rho0 = DensityMatrix::level_projector(b.dim, 0);
  std::vector<double> grid(400);
  for (int i = 0; i < 400; ++i) grid[i] = 400000.0 * i / 399.0;
  grid[0] = 0.0;
  for (auto _ : state) {
    Trajectory traj = propagate(gen, rho0, grid);
    benchmark::DoNotOptimize(traj.populations.back().data());
  }
}
BENCHMARK(BM_propagate_effective_chain)->Unit(benchmark::kMillisecond);

void BM_ergotropy(benchmark::State& state) {
  const auto b = BatteryModel::uniform_ladder(50, 1.0);
  const DensityMatrix rho = thermal_state(b, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ergotropy(rho, b));
  }
}
BENCHMARK(BM_ergotropy);

}  // namespace

BENCHMARK_MAIN();
