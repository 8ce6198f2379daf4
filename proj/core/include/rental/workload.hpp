#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "rental/speedup.hpp"

namespace rental {

// Job-size distributions, in single-GPU work-hours.
struct Deterministic {
  double value;
  bool operator==(const Deterministic&) const = default;
};
struct Exponential {
  double mean;
  bool operator==(const Exponential&) const = default;
};
/// Pareto with shape alpha truncated to [min, max].
struct BoundedPareto {
  double shape;
  double min;
  double max;
  bool operator==(const BoundedPareto&) const = default;
};
struct Weibull {
  double shape;
  double scale;
  bool operator==(const Weibull&) const = default;
};

class SizeDistribution {
 public:
  using Variant = std::variant<Deterministic, Exponential, BoundedPareto, Weibull>;

  /// Throws InvalidInput when parameters do not give a finite positive mean.
  SizeDistribution(Variant v);

  double mean() const noexcept { return mean_; }
  double sample(std::mt19937_64& rng) const;
  const Variant& variant() const noexcept { return v_; }

  bool operator==(const SizeDistribution& o) const { return v_ == o.v_; }

 private:
  Variant v_;
  double mean_;
};

struct JobType {
  std::string name;
  SpeedupFunction speedup;
  double arrival_rate;  // jobs per hour
  SizeDistribution size_dist;

  /// rho_i = lambda_i * E[X_i], GPU-hours of work arriving per hour.
  double load() const noexcept { return arrival_rate * size_dist.mean(); }
};

enum class ArrivalProcess { Poisson, Deterministic };

/**
 * Job-type population plus the time-average GPU budget b.
 *
 * Construction rejects an empty type list, non-positive rates and a
 * non-positive budget. Stability (total load below budget) is a separate
 * query so that frontier sweeps and the validator can inspect unstable specs.
 */
class WorkloadSpec {
 public:
  WorkloadSpec(std::vector<JobType> types, double budget,
               ArrivalProcess arrivals = ArrivalProcess::Poisson);

  const std::vector<JobType>& types() const noexcept { return types_; }
  std::size_t size() const noexcept { return types_.size(); }
  const JobType& type(std::size_t i) const { return types_.at(i); }
  double budget() const noexcept { return budget_; }
  ArrivalProcess arrivals() const noexcept { return arrivals_; }

  double total_arrival_rate() const noexcept;
  double total_load() const noexcept;
  std::vector<double> loads() const;

  bool is_stable() const noexcept { return total_load() < budget_; }
  /// Throws InstabilityError when total load >= budget.
  void require_stable() const;

  WorkloadSpec with_budget(double budget) const;

 private:
  std::vector<JobType> types_;
  double budget_;
  ArrivalProcess arrivals_;
};

struct TraceEvent {
  double arrival_time;  // hours
  std::size_t type_index;
  double size;  // work-hours
  bool operator==(const TraceEvent&) const = default;
};

/// Arrival sequence sorted by time. seed is 0 for traces read from disk.
struct Trace {
  std::vector<TraceEvent> events;
  std::uint64_t seed = 0;

  bool empty() const noexcept { return events.empty(); }
  std::size_t size() const noexcept { return events.size(); }
};

/// Exactly job_count arrivals, merged across types. Pure in (spec, job_count, seed).
Trace generate_trace(const WorkloadSpec& spec, std::size_t job_count, std::uint64_t seed);

struct TypeLoadEstimate {
  std::size_t count = 0;
  double arrival_rate = 0.0;
  double mean_size = 0.0;
  double load = 0.0;
};

/// Per-type empirical rate, mean size and load, with the horizon taken as the
/// last arrival time. Throws InvalidInput on an empty trace or a zero horizon.
std::vector<TypeLoadEstimate> empirical_loads(const Trace& trace, const WorkloadSpec& spec);

/// Checks sortedness, positive sizes and type indices against spec.
void check_trace(const Trace& trace, const WorkloadSpec& spec);

}  // namespace rental
