#include "rental/simulator.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "reference.hpp"
#include "rental/errors.hpp"
#include "rental/optimizer.hpp"

namespace rental {
namespace {

using testing::exp_type;
using testing::two_type_spec;
using testing::single_power_spec;

const std::vector<Policy>& all_policy_kinds() {
  static const std::vector<Policy> policies{FixedWidth{{6.0, 9.0}}, UniformWidth{2.0},
                                            StaticClusterEqualSplit{3.0},
                                            SmallestRemainingFirst{4.0, 2.0},
                                            StaticClusterEqualSplit{0.7}};
  return policies;
}

Trace one_job(double size, double at = 0.0) {
  Trace t;
  t.events.push_back({at, 0, size});
  return t;
}

TEST(Simulate, EmptyTrace) {
  for (const auto& p : all_policy_kinds()) {
    const auto m = simulate(Trace{}, two_type_spec(), p);
    EXPECT_EQ(m.job_count, 0u);
    EXPECT_EQ(m.time_avg_budget, 0.0);
    EXPECT_FALSE(m.mean_response_time);
  }
}

TEST(Simulate, SingleFixedJob) {
  const auto m = simulate(one_job(2.0), single_power_spec(), FixedWidth{{4.0}}, {true});
  EXPECT_DOUBLE_EQ(*m.mean_response_time, 1.0);
  EXPECT_DOUBLE_EQ(m.total_gpu_hours, 4.0);
  EXPECT_DOUBLE_EQ((*m.per_job)[0].gpu_hours, 4.0);
  EXPECT_DOUBLE_EQ(m.horizon, 1.0);
  EXPECT_DOUBLE_EQ(m.time_avg_budget, 4.0);
}

TEST(Simulate, ClusterHandExamples) {
  const auto spec = single_power_spec();
  // Alone on 4 GPUs: speed 2, size 2 -> done at 1.
  auto m = simulate(one_job(2.0), spec, StaticClusterEqualSplit{4.0});
  EXPECT_DOUBLE_EQ(*m.mean_response_time, 1.0);
  EXPECT_DOUBLE_EQ(m.total_gpu_hours, 4.0);

  // Two unit jobs share one GPU: half a GPU each at speed 0.5 -> both done at 2.
  Trace t;
  t.events = {{0.0, 0, 1.0}, {0.0, 0, 1.0}};
  m = simulate(t, spec, StaticClusterEqualSplit{1.0}, {true});
  EXPECT_DOUBLE_EQ(*m.mean_response_time, 2.0);
  EXPECT_DOUBLE_EQ(m.total_gpu_hours, 2.0);

  // Staggered: job A (size 2) alone on 4 GPUs for 0.5h does 1 unit; then
  // shares 2 GPUs each (speed sqrt 2) with job B (size 1).
  t.events = {{0.0, 0, 2.0}, {0.5, 0, 1.0}};
  m = simulate(t, spec, StaticClusterEqualSplit{4.0}, {true});
  const double both = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR((*m.per_job)[0].completion, 0.5 + both, 1e-12);
  EXPECT_NEAR((*m.per_job)[1].completion, 0.5 + both, 1e-12);
  EXPECT_NEAR(m.total_gpu_hours, 4.0 * (0.5 + both), 1e-12);
}

TEST(Simulate, SmallestRemainingFirstServesShortJobFirst) {
  const auto spec = single_power_spec();
  Trace t;
  t.events = {{0.0, 0, 4.0}, {0.0, 0, 1.0}};
  // Pool of 4 with cap 4: the short job takes everything (speed 2) and
  // finishes at 0.5, then the long job runs alone at speed 2.
  const auto m = simulate(t, spec, SmallestRemainingFirst{4.0, 4.0}, {true});
  const auto& jobs = *m.per_job;
  EXPECT_DOUBLE_EQ(jobs[0].completion, 0.5);  // canonical order puts the size-1 job first
  EXPECT_DOUBLE_EQ(jobs[0].start, 0.0);
  EXPECT_DOUBLE_EQ(jobs[1].start, 0.5);
  EXPECT_DOUBLE_EQ(jobs[1].completion, 2.5);
}

TEST(Simulate, SmallestRemainingFirstSplitsPoolByCap) {
  const auto spec = single_power_spec();
  Trace t;
  t.events = {{0.0, 0, 1.0}, {0.0, 0, 2.0}, {0.0, 0, 3.0}};
  const auto series = budget_timeseries(t, spec, SmallestRemainingFirst{5.0, 2.0}, 0.25);
  // 2 + 2 + 1 GPUs at the start.
  EXPECT_DOUBLE_EQ(series.front().second, 5.0);
}

TEST(Simulate, FixedWidthNeverQueues) {
  const auto spec = two_type_spec();
  const auto m = simulate(generate_trace(spec, 5000, 9), spec, FixedWidth{{6.0, 9.0}}, {true});
  for (const auto& r : *m.per_job) EXPECT_EQ(r.start, r.arrival);
}

TEST(Simulate, GpuHoursAndWorkConservation) {
  const auto spec = two_type_spec();
  const auto trace = generate_trace(spec, 3000, 21);
  for (const auto& p : all_policy_kinds()) {
    const auto m = simulate(trace, spec, p, {true});
    double hours = 0.0, response = 0.0;
    std::vector<double> sizes;
    for (const auto& e : trace.events) sizes.push_back(e.size);
    std::vector<double> done;
    for (const auto& r : *m.per_job) {
      hours += r.gpu_hours;
      response += r.response;
      done.push_back(r.work_done);
      EXPECT_GE(r.start, r.arrival);
      EXPECT_GT(r.completion, r.arrival);
    }
    EXPECT_NEAR(m.total_gpu_hours, hours, 1e-9 * hours) << describe(p);
    EXPECT_NEAR(*m.mean_response_time, response / 3000.0, 1e-12 * response) << describe(p);
    std::sort(sizes.begin(), sizes.end());
    std::sort(done.begin(), done.end());
    for (std::size_t j = 0; j < sizes.size(); ++j) {
      EXPECT_NEAR(done[j], sizes[j], 1e-9 * sizes[j]) << describe(p);
    }
  }
}

TEST(Simulate, TiedArrivalsOrderIndependent) {
  const auto spec = two_type_spec();
  Trace a;
  a.events = {{0.0, 1, 2.0}, {0.0, 0, 1.0}, {0.0, 0, 0.5}, {1.0, 1, 1.0},
              {1.0, 0, 3.0}, {1.0, 1, 0.2}, {2.5, 0, 1.0}};
  Trace b = a;
  std::reverse(b.events.begin(), b.events.begin() + 3);
  std::swap(b.events[3], b.events[5]);
  for (const auto& p : all_policy_kinds()) {
    const auto ma = simulate(a, spec, p, {true});
    const auto mb = simulate(b, spec, p, {true});
    EXPECT_EQ(*ma.mean_response_time, *mb.mean_response_time) << describe(p);
    EXPECT_EQ(ma.total_gpu_hours, mb.total_gpu_hours) << describe(p);
    EXPECT_EQ(ma.horizon, mb.horizon) << describe(p);
  }
}

TEST(Simulate, ClusterNeverExceedsCapacity) {
  const auto spec = two_type_spec();
  const auto trace = generate_trace(spec, 2000, 4);
  for (double c : {0.5, 2.0, 7.0}) {
    for (const auto& [t, k] : budget_timeseries(trace, spec, StaticClusterEqualSplit{c}, 0.05)) {
      EXPECT_LE(k, c * (1 + 1e-12));
      EXPECT_TRUE(k == 0.0 || std::abs(k - c) < 1e-12 * c) << t;
    }
  }
}

TEST(Simulate, Errors) {
  const auto spec = two_type_spec();
  EXPECT_THROW(simulate(one_job(1.0), spec, FixedWidth{{1.0}}), InvalidInput);
  EXPECT_THROW(simulate(one_job(1.0), spec, FixedWidth{{1.0, 0.5}}), InvalidInput);
  EXPECT_THROW(simulate(one_job(1.0), spec, UniformWidth{0.5}), InvalidInput);
  EXPECT_THROW(simulate(one_job(1.0), spec, StaticClusterEqualSplit{0.0}), InvalidInput);
  EXPECT_THROW(simulate(one_job(1.0), spec, SmallestRemainingFirst{1.0, -1.0}), InvalidInput);
  Trace bad;
  bad.events = {{0.0, 5, 1.0}};
  EXPECT_THROW(simulate(bad, spec, UniformWidth{1.0}), InvalidInput);
}

// Relative error of the simulated budget and mean response against the
// fixed-width formulas; median over 20 seeds shrinks with trace length.
TEST(Simulate, AnalyticIdentitiesConverge) {
  const auto spec = two_type_spec(2.0);
  const std::vector<double> ks{testing::kTwoTypeK1, testing::kTwoTypeK2};
  const double budget = budget_usage(spec, ks);
  const double response = objective(spec, ks);
  double prev_b = 1e9, prev_r = 1e9;
  for (std::size_t n : {1'000u, 10'000u, 100'000u}) {
    std::vector<double> eb, er;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto m = simulate(generate_trace(spec, n, 500 + seed), spec, FixedWidth{ks});
      eb.push_back(std::abs(m.time_avg_budget - budget) / budget);
      er.push_back(std::abs(*m.mean_response_time - response) / response);
    }
    std::nth_element(eb.begin(), eb.begin() + 10, eb.end());
    std::nth_element(er.begin(), er.begin() + 10, er.end());
    EXPECT_LE(eb[10], prev_b) << n;
    EXPECT_LE(er[10], prev_r) << n;
    prev_b = eb[10];
    prev_r = er[10];
  }
  EXPECT_LE(prev_b, 0.01);
  EXPECT_LE(prev_r, 0.01);
}

TEST(ComparePolicies, UnitWidthBaseline) {
  const auto spec = two_type_spec(2.0);
  const auto trace = generate_trace(spec, 20'000, 8);
  const auto opt = solve_allocation(spec);
  const std::vector<Policy> policies{FixedWidth{opt.ks}, UniformWidth{1.0}};
  const auto rows = compare_policies(trace, spec, policies);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].policy, policies[1]);
  double mean_size = 0.0;
  for (const auto& e : trace.events) mean_size += e.size;
  mean_size /= static_cast<double>(trace.size());
  EXPECT_NEAR(*rows[1].metrics.mean_response_time, mean_size, 1e-12 * mean_size);
  EXPECT_LE(*rows[0].metrics.mean_response_time, *rows[1].metrics.mean_response_time);
}

TEST(ComparePolicies, IdenticalPoliciesIdenticalMetrics) {
  const auto spec = two_type_spec(2.0);
  const auto trace = generate_trace(spec, 5000, 8);
  const std::vector<Policy> policies{FixedWidth{{3.0, 5.0}}, FixedWidth{{3.0, 5.0}}};
  const auto rows = compare_policies(trace, spec, policies);
  EXPECT_EQ(*rows[0].metrics.mean_response_time, *rows[1].metrics.mean_response_time);
  EXPECT_EQ(rows[0].metrics.total_gpu_hours, rows[1].metrics.total_gpu_hours);
}

TEST(BudgetTimeseries, EmptyTrace) {
  const auto s = budget_timeseries(Trace{}, two_type_spec(), UniformWidth{2.0}, 0.5);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0], std::make_pair(0.0, 0.0));
}

TEST(BudgetTimeseries, RightContinuousStep) {
  // Size 2 on k = 4 with sqrt speedup: one hour on four GPUs.
  const auto s = budget_timeseries(one_job(2.0), single_power_spec(), FixedWidth{{4.0}}, 0.5);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], std::make_pair(0.0, 4.0));
  EXPECT_EQ(s[1], std::make_pair(0.5, 4.0));
  EXPECT_EQ(s[2], std::make_pair(1.0, 0.0));
}

TEST(BudgetTimeseries, RiemannSumBound) {
  const auto spec = two_type_spec();
  const double step = 0.01;
  // A single job: the sum is off by at most one step times the peak.
  {
    const auto s = budget_timeseries(one_job(1.7, 0.003), spec, FixedWidth{{6.0, 9.0}}, step);
    const auto m = simulate(one_job(1.7, 0.003), spec, FixedWidth{{6.0, 9.0}});
    double sum = 0.0, peak = 0.0;
    for (const auto& [t, k] : s) {
      sum += k * step;
      peak = std::max(peak, k);
    }
    EXPECT_LE(std::abs(sum - m.total_gpu_hours), step * peak);
  }
  // Many fixed-width jobs: bounded by step times the total variation of K,
  // which is twice the summed widths.
  const auto trace = generate_trace(spec, 500, 3);
  const std::vector<double> ks{6.0, 9.0};
  const auto s = budget_timeseries(trace, spec, FixedWidth{ks}, step);
  const auto m = simulate(trace, spec, FixedWidth{ks});
  double sum = 0.0, variation = 0.0;
  for (const auto& [t, k] : s) sum += k * step;
  for (const auto& e : trace.events) variation += 2.0 * ks[e.type_index];
  EXPECT_LE(std::abs(sum - m.total_gpu_hours), step * variation);
}

TEST(BudgetTimeseries, RejectsBadStep) {
  EXPECT_THROW(budget_timeseries(Trace{}, two_type_spec(), UniformWidth{1.0}, 0.0), InvalidInput);
  EXPECT_THROW(budget_timeseries(Trace{}, two_type_spec(), UniformWidth{1.0}, -1.0), InvalidInput);
}

TEST(Describe, PolicyText) {
  EXPECT_EQ(describe(FixedWidth{{6.0, 9.5}}), "fixed:6,9.5");
  EXPECT_EQ(describe(UniformWidth{1.0}), "uniform:1");
  EXPECT_EQ(describe(StaticClusterEqualSplit{3.0}), "cluster:3");
  EXPECT_EQ(describe(SmallestRemainingFirst{8.0, 2.0}), "srf:8,2");
}

}  // namespace
}  // namespace rental
