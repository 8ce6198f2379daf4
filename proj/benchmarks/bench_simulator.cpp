#include <benchmark/benchmark.h>

#include "rental/optimizer.hpp"
#include "rental/simulator.hpp"

namespace {

using namespace rental;

WorkloadSpec two_type_spec() {
  return WorkloadSpec({{"amdahl", SpeedupFunction::amdahl(0.8), 0.4, SizeDistribution(Exponential{1.0})},
                       {"sqrt", SpeedupFunction::power(0.5), 0.4, SizeDistribution(Exponential{1.0})}},
                      2.0);
}

void BM_GenerateTrace(benchmark::State& state) {
  const auto spec = two_type_spec();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_trace(spec, n, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateTrace)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state, Policy policy) {
  const auto spec = two_type_spec();
  const auto trace = generate_trace(spec, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(trace, spec, policy));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_Simulate, fixed, Policy(FixedWidth{{6.0, 9.0}}))
    ->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Simulate, cluster, Policy(StaticClusterEqualSplit{4.0}))
    ->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Simulate, srf, Policy(SmallestRemainingFirst{4.0, 2.0}))
    ->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
