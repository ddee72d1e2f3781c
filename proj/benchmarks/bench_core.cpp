#include <benchmark/benchmark.h>

#include <spinsense/metrics.hpp>
#include <spinsense/oracle.hpp>

using namespace spinsense;

namespace {

SensingScenario ghz_scenario(int n, Channel ch) {
  SensingScenario sc;
  sc.sites = n;
  sc.channel = ch;
  sc.state = StateKind::ghz();
  sc.gamma = 0.5;
  sc.phi = 1.0;
  return sc;
}

void BM_DephasingPropagate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexMatrix rho0 = density_from_pure(product_plus_state(n));
  const DephasingChannel ch = DephasingChannel::uniform(n, 0.5, 1.0);
  for (auto _ : state) {
    ComplexMatrix rho = dephasing_propagate(rho0, ch, 0.8);
    benchmark::DoNotOptimize(rho.data());
  }
}
BENCHMARK(BM_DephasingPropagate)->DenseRange(2, 8, 2);

void BM_EmissionPropagate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexMatrix rho0 = density_from_pure(ghz_state(n));
  const EmissionChannel ch{0.5, 1.0};
  for (auto _ : state) {
    ComplexMatrix rho = emission_propagate(rho0, ch, 0.8);
    benchmark::DoNotOptimize(rho.data());
  }
}
BENCHMARK(BM_EmissionPropagate)->DenseRange(2, 8, 2);

void BM_HermitianEig(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexMatrix rho = emission_propagate(
      density_from_pure(ghz_state(n)), EmissionChannel{0.5, 1.0}, 0.8);
  for (auto _ : state) {
    EigDecomposition eig = hermitian_eig(rho);
    benchmark::DoNotOptimize(eig.eigenvalues.data());
  }
}
BENCHMARK(BM_HermitianEig)->DenseRange(2, 8, 2);

void BM_GainDensePipeline(benchmark::State& state) {
  const auto sc = ghz_scenario(static_cast<int>(state.range(0)),
                               Channel::Emission);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gain_numeric(sc, 0.9));
  }
}
BENCHMARK(BM_GainDensePipeline)->DenseRange(2, 6, 2);

void BM_GainReducedPipeline(benchmark::State& state) {
  const auto sc = ghz_scenario(static_cast<int>(state.range(0)),
                               Channel::Emission);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gain_fast(sc, 0.9));
  }
}
BENCHMARK(BM_GainReducedPipeline)->DenseRange(2, 10, 4);

void BM_IntegratedGain(benchmark::State& state) {
  const auto sc = ghz_scenario(static_cast<int>(state.range(0)),
                               Channel::Dephasing);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrated_gain(sc, 1e-9));
  }
}
BENCHMARK(BM_IntegratedGain)->DenseRange(2, 6, 2);

void BM_OracleRk4Step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexMatrix rho0 = density_from_pure(ghz_state(n));
  const LindbladProblem p = make_emission_problem(n, 0.5, 1.0, rho0);
  IntegratorConfig cfg;
  cfg.step = 5e-4;
  for (auto _ : state) {
    ComplexMatrix rho = integrate(p, 5e-3, cfg);  // ten RK4 steps
    benchmark::DoNotOptimize(rho.data());
  }
}
BENCHMARK(BM_OracleRk4Step)->DenseRange(2, 6, 2);

}  // namespace

BENCHMARK_MAIN();
