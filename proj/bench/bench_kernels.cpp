// Serial reference against the OpenMP kernels on the main scan workloads.
// The benchmark argument selects the policy: 0 = Serial, 1 = OpenMP.

#include <benchmark/benchmark.h>

#include "wsq/bellman_verify.hpp"
#include "wsq/brownian.hpp"
#include "wsq/circle_operators.hpp"
#include "wsq/dyadic_sim.hpp"

using namespace wsq;

namespace {

Exec policy(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::OpenMP; }

void BM_Concavity(benchmark::State& state) {
  const auto params = bellman::derive_params(10.0);
  verify::ScanConfig cfg;
  cfg.n_random = 2000;
  cfg.grid_nodes = 3;
  cfg.exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(verify::check_concavity(params, cfg, 16));
}

void BM_HessianOracle(benchmark::State& state) {
  const auto params = bellman::derive_params(10.0);
  verify::ScanConfig cfg;
  cfg.n_random = 2000;
  cfg.exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(verify::check_hessian_oracle(params, cfg));
}

void BM_MainInequality(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dyadic::test_main_inequality(3.0, 500, 10, 42, policy(state)));
}

void BM_Brownian(benchmark::State& state) {
  const auto f = circle::closed_form("cos");
  circle::BrownianConfig cfg;
  cfg.paths = 2000;
  cfg.dt = 1e-3;
  cfg.exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(circle::brownian_energy(f, cfg));
}

void BM_PoissonAp(benchmark::State& state) {
  const auto w = circle::closed_form("cos_half");
  for (auto _ : state) benchmark::DoNotOptimize(circle::poisson_ap_characteristic(w, 2.0, {}, policy(state)));
}

}  // namespace

BENCHMARK(BM_Concavity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HessianOracle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MainInequality)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Brownian)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PoissonAp)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
