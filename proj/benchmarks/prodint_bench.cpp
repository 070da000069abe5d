#include "prodint/estimates.hpp"
#include "prodint/evolution.hpp"
#include "prodint/trotter.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace prodint;

static void BM_EvolveSo3(benchmark::State& state) {
  const GroupPtr g = make_group("so3");
  std::mt19937_64 rng(1);
  const auto phi = random_trig_curve(*g, rng, 1.0, 0.0, 1.0);
  const StepperConfig cfg{Scheme::midpoint, static_cast<int>(state.range(0)), true};
  for (auto _ : state) benchmark::DoNotOptimize(evolve(*g, phi, 0.0, 1.0, cfg).endpoint.value.data());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvolveSo3)->RangeMultiplier(4)->Range(256, 4096);

static void BM_EvolveGl4(benchmark::State& state) {
  const GroupPtr g = make_group("gl4");
  std::mt19937_64 rng(2);
  const auto phi = random_polynomial_curve(*g, rng, 1.0, 0.0, 1.0);
  const StepperConfig cfg{Scheme::midpoint, 1024, true};
  for (auto _ : state) benchmark::DoNotOptimize(evolve(*g, phi, 0.0, 1.0, cfg).endpoint.value.data());
}
BENCHMARK(BM_EvolveGl4);

static void BM_TrotterSweepGl2(benchmark::State& state) {
  const GroupPtr g = make_group("gl2");
  const auto fam = make_trotter_family(
      exp_product_curve(g, g->algebra(std::vector<double>{0.3, 0.8, -0.2, 0.1}),
                        g->algebra(std::vector<double>{0.1, -0.3, 0.7, -0.4}), 1, 0.0, 1.0),
      2.0);
  const auto p = Seminorm::frobenius(g->space());
  const int ns[] = {16, 32, 64, 128, 256, 512, 1024};
  for (auto _ : state) benchmark::DoNotOptimize(uniform_trotter_sweep(fam, 41, ns, p).rows.back().sup_error);
}
BENCHMARK(BM_TrotterSweepGl2)->Unit(benchmark::kMillisecond);

static void BM_MuConvexityProbeSo3(benchmark::State& state) {
  const GroupPtr g = make_group("so3");
  const auto p = Seminorm::frobenius(g->space());
  for (auto _ : state) benchmark::DoNotOptimize(mu_convexity_probe(*g, p, p, {1000, 8, 0.5, 3}).violations);
}
BENCHMARK(BM_MuConvexityProbeSo3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
