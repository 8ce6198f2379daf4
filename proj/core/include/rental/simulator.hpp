#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rental/workload.hpp"

namespace rental {

/// Every type-i job gets ks[i] GPUs on arrival and keeps them until done.
struct FixedWidth {
  std::vector<double> ks;
  bool operator==(const FixedWidth&) const = default;
};

/// Fixed width with the same k for every type.
struct UniformWidth {
  double k;
  bool operator==(const UniformWidth&) const = default;
};

/// C GPUs rented while any job is present, split equally among present jobs.
struct StaticClusterEqualSplit {
  double cluster;
  bool operator==(const StaticClusterEqualSplit&) const = default;
};

/// Jobs ordered by remaining work; each in turn gets min(k_cap, what is left
/// of the pool C). A simple size-priority baseline, re-planned at events.
struct SmallestRemainingFirst {
  double cluster;
  double k_cap;
  bool operator==(const SmallestRemainingFirst&) const = default;
};

using Policy = std::variant<FixedWidth, UniformWidth, StaticClusterEqualSplit, SmallestRemainingFirst>;

/// Text form used by the CLI: fixed:k1,...,kM | uniform:k | cluster:C | srf:C,kcap.
std::string describe(const Policy& policy);

/// Throws InvalidInput for non-positive parameters, k < 1 on fixed widths,
/// or a FixedWidth whose length differs from the number of job types.
void check_policy(const Policy& policy, const WorkloadSpec& spec);

struct JobRecord {
  double arrival = 0.0;
  double start = 0.0;  // first instant the job held any GPUs
  double completion = 0.0;
  double response = 0.0;
  double gpu_hours = 0.0;
  double work_done = 0.0;
  std::size_t type_index = 0;
};

struct SimMetrics {
  std::size_t job_count = 0;
  std::optional<double> mean_response_time;  // absent for an empty trace
  double time_avg_budget = 0.0;              // integral of K over [0, horizon] / horizon
  double total_gpu_hours = 0.0;              // integral of K over [0, horizon]
  double horizon = 0.0;                      // last completion time
  std::optional<std::vector<JobRecord>> per_job;
};

struct SimOptions {
  bool record_per_job = false;
};

/**
 * Event-driven replay of a trace under a rental policy. Every job runs to
 * completion; the rented-GPU count K(t) is piecewise constant between events
 * and integrated exactly.
 *
 * Events with equal arrival times are processed in (time, type, size) order,
 * so permuting tied rows of a trace does not change the result. Per-job
 * records come out in that order.
 */
SimMetrics simulate(const Trace& trace, const WorkloadSpec& spec, const Policy& policy,
                    const SimOptions& opts = {});

struct PolicyResult {
  Policy policy;
  SimMetrics metrics;
};

/// simulate() for each policy on the same trace, in the given order.
std::vector<PolicyResult> compare_policies(const Trace& trace, const WorkloadSpec& spec,
                                           std::span<const Policy> policies,
                                           const SimOptions& opts = {});

/// K(t) sampled at t = 0, step, 2 step, ... until the first sample at or past
/// the last completion. Right-continuous: a sample at an event instant sees
/// the state after the event.
std::vector<std::pair<double, double>> budget_timeseries(const Trace& trace,
                                                         const WorkloadSpec& spec,
                                                         const Policy& policy, double step);

}  // namespace rental
