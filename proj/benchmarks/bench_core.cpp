#include <benchmark/benchmark.h>

#include <vector>

#include "parablock/dynamics.hpp"
#include "parablock/generic_model.hpp"
#include "parablock/lindblad.hpp"

using namespace parablock;

namespace {

Liouvillian generic_liouvillian(int dim) {
  generic::ReducedParams rp;
  rp.alpha = 1.0;
  rp.F2 = 0.1;
  const FockSpace s({dim, dim});
  return build_liouvillian(generic::build_reduced_hamiltonian(rp, s), generic::reduced_channels(rp, s));
}

void BM_BuildLiouvillian(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generic_liouvillian(dim));
}
BENCHMARK(BM_BuildLiouvillian)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_SteadyState(benchmark::State& state) {
  const Liouvillian l = generic_liouvillian(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(steady_state(l));
}
BENCHMARK(BM_SteadyState)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_Evolve(benchmark::State& state) {
  const Liouvillian l = generic_liouvillian(5);
  std::vector<double> t;
  for (int i = 0; i <= 100; ++i) t.push_back(0.1 * i);
  const DensityMatrix rho0 = DensityMatrix::vacuum(l.space());
  for (auto _ : state) benchmark::DoNotOptimize(evolve(rho0, Generator(l), t, {}));
}
BENCHMARK(BM_Evolve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
