// Serial reference vs OpenMP driver for the empirical-level simulation, plus
// the dense kernels that dominate a single replication.

#include <random>

#include <benchmark/benchmark.h>

#include "survtest/cvm.hpp"
#include "survtest/numerics.hpp"
#include "survtest/sim.hpp"

using namespace survtest;

namespace {

sim::SimConfig config(int J, int n) {
  sim::SimConfig cfg;
  cfg.groups.assign(static_cast<std::size_t>(J), {100.0, n});
  cfg.censoring = sim::Censoring::poisson(90.0);
  cfg.replications = 64;
  cfg.seed = 1;
  return cfg;
}

void BM_LevelsSerial(benchmark::State& state) {
  const auto cfg = config(static_cast<int>(state.range(0)), 50);
  for (auto _ : state) benchmark::DoNotOptimize(sim::reference::empirical_level(cfg).logrank.level);
  state.SetItemsProcessed(state.iterations() * cfg.replications);
}

void BM_LevelsParallel(benchmark::State& state) {
  const auto cfg = config(static_cast<int>(state.range(0)), 50);
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(sim::empirical_level(cfg, threads).logrank.level);
  state.SetItemsProcessed(state.iterations() * cfg.replications);
}

void BM_JacobiEigenvalues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(1);
  std::normal_distribution<double> z;
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m.set(i, j, z(gen));
  for (auto _ : state) benchmark::DoNotOptimize(sym_eigenvalues(m).front());
}

void BM_ImhofTail(benchmark::State& state) {
  std::vector<double> l;
  for (int i = 0; i < state.range(0); ++i) l.push_back(1.0 / (1.0 + i * i));
  for (auto _ : state) benchmark::DoNotOptimize(imhof_tail(l, 0.8));
}

void BM_CvmReplication(benchmark::State& state) {
  const auto cfg = config(static_cast<int>(state.range(0)), 50);
  const auto obs = sim::sample_replication(cfg, 0);
  const RiskTable rt(obs, cfg.groups.size());
  for (auto _ : state) benchmark::DoNotOptimize(cvm_test(rt, WeightSpec::unit()).p_value);
}

}  // namespace

BENCHMARK(BM_LevelsSerial)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LevelsParallel)->ArgsProduct({{2, 8}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_JacobiEigenvalues)->RangeMultiplier(2)->Range(8, 256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ImhofTail)->Arg(1)->Arg(16)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CvmReplication)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
