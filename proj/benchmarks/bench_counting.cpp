#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "qdioph/asymptotics.hpp"
#include "qdioph/counting.hpp"
#include "qdioph/heights.hpp"
#include "qdioph/regions.hpp"
#include "qdioph/siegel.hpp"

namespace {

using namespace qdioph;

ProblemSpec gaussian(double T) {
  ProblemSpec s;
  s.field = field_new(1);
  s.v.assign(3, QuadInt{0, 0});
  s.T = T;
  return s;
}

void BM_CountSolutions(benchmark::State& state) {
  const ProblemSpec spec = gaussian(static_cast<double>(state.range(0)));
  const Theta theta = sample_theta(1, 2, 1.0, 1, 0);
  std::uint64_t q = 0;
  for (auto _ : state) {
    const CountReport r = count_solutions(spec, theta);
    q = r.q_enumerated;
    benchmark::DoNotOptimize(r.count);
  }
  state.counters["q_per_s"] = benchmark::Counter(static_cast<double>(q), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_CountSolutions)->RangeMultiplier(10)->Range(100, 100000)->Unit(benchmark::kMillisecond);

void BM_CountBruteForce(benchmark::State& state) {
  const ProblemSpec spec = gaussian(static_cast<double>(state.range(0)));
  const Theta theta = sample_theta(1, 2, 1.0, 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(count_brute_force(spec, theta));
}
BENCHMARK(BM_CountBruteForce)->RangeMultiplier(10)->Range(100, 1000)->Unit(benchmark::kMillisecond);

void BM_DiscLatticeCount(benchmark::State& state) {
  const FieldSpec f = field_new(3);
  const double r = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(disc_lattice_count(f, unit_ideal(), {0, 0}, {0.31, 0.17}, r));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DiscLatticeCount)->RangeMultiplier(4)->Range(4, 1024)->Complexity(benchmark::oNSquared);

void BM_MonteCarloVolume(benchmark::State& state) {
  const RegionSpec r{RegionKind::kEMinus, 1, 2, PsiSpec::power(1, 0.5), 100, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_volume(r, static_cast<std::uint64_t>(state.range(0)), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarloVolume)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SiegelMeanValue(benchmark::State& state) {
  const double r = std::sqrt(2 / std::numbers::pi);
  for (auto _ : state) benchmark::DoNotOptimize(siegel_mc_check(r, static_cast<std::uint64_t>(state.range(0)), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SiegelMeanValue)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_SubspaceCount(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(subspace_count(3, x));
}
BENCHMARK(BM_SubspaceCount)->RangeMultiplier(4)->Range(16, 1000);

}  // namespace

BENCHMARK_MAIN();
