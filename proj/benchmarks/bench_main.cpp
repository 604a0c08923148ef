#include <benchmark/benchmark.h>

#include "tmkt/dispersion.hpp"
#include "tmkt/kinetics.hpp"
#include "tmkt/patch.hpp"
#include "tmkt/pde_sim.hpp"

using namespace tmkt;

namespace {

const KineticParams kRatio{1, 10, 2, 1, 2};

void BM_Eigenvalues4(benchmark::State& state) {
  const PatchParams q(0.3, 0.2, MigrationFunction::rational(2), MigrationFunction::rational(2));
  const Matrix4 M = patch_jacobian(kRatio) + gamma_matrix(q, {5, 2.5});
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(M));
}
BENCHMARK(BM_Eigenvalues4);

void BM_DispersionScan(benchmark::State& state) {
  const Matrix2 A = interior_jacobian(Model::ratio, kRatio);
  const DiffusionMatrix2 D(1, 1, 0.5, 1);
  const SpatialDomain domain(100, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dispersion_scan(A, D, domain));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DispersionScan)->Arg(200)->Arg(2000);

void BM_Rk4Step(benchmark::State& state) {
  const SimSystem sys{SimModel::ratio, kRatio, DiffusionMatrix2(1, 1, 0.5, 1), std::nullopt,
                      std::nullopt, Reaction::enabled};
  const Grid1D grid(100, static_cast<std::size_t>(state.range(0)));
  Field f = perturbed_equilibrium(sys, grid, 1e-3, 0);
  Integrator integrator(sys, grid, 10.0);
  const double dt = stable_dt_bound(sys, grid, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(integrator.step(f, dt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Rk4Step)->Arg(256)->Arg(1024);

}  // namespace
BENCHMARK_MAIN();
