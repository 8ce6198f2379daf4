#include <benchmark/benchmark.h>

#include <random>

#include "rental/optimizer.hpp"

namespace {

using namespace rental;

WorkloadSpec random_spec(std::size_t types, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  std::vector<JobType> ts;
  for (std::size_t i = 0; i < types; ++i) {
    auto f = i % 2 ? SpeedupFunction::power(u(0.2, 0.9)) : SpeedupFunction::amdahl(u(0.5, 0.97));
    ts.push_back({"t" + std::to_string(i), f, u(0.1, 1.0), SizeDistribution(Exponential{u(0.5, 2.0)})});
  }
  const WorkloadSpec probe(ts, 1.0);
  return probe.with_budget(3.0 * probe.total_load());
}

void BM_InnerMinimize(benchmark::State& state) {
  const auto f = SpeedupFunction::amdahl(0.9);
  for (auto _ : state) benchmark::DoNotOptimize(inner_minimize(f, 0.05));
}
BENCHMARK(BM_InnerMinimize);

void BM_SolveAllocation(benchmark::State& state) {
  const auto spec = random_spec(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_allocation(spec));
}
BENCHMARK(BM_SolveAllocation)->Arg(1)->Arg(2)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_BruteForce(benchmark::State& state) {
  const auto spec = random_spec(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_allocation(spec, 1e-3));
}
BENCHMARK(BM_BruteForce)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ParetoFrontier(benchmark::State& state) {
  const auto spec = random_spec(2, 3);
  std::vector<double> budgets;
  for (int j = 1; j <= 50; ++j) budgets.push_back(spec.total_load() * (1.0 + 0.1 * j));
  for (auto _ : state) benchmark::DoNotOptimize(pareto_frontier(spec, budgets, {}, 1));
}
BENCHMARK(BM_ParetoFrontier)->Unit(benchmark::kMillisecond);

}  // namespace
