#include "rental/workload.hpp"

#include <cmath>
#include <functional>
#include <queue>
#include <utility>

#include "rental/errors.hpp"

namespace rental {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Uniform on the open interval (0, 1), built from the top 52 bits so the
// stream is identical across standard library implementations.
double open_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 12) + 0.5) * 0x1.0p-52;
}

double exponential_draw(std::mt19937_64& rng) { return -std::log(open_uniform(rng)); }

double bounded_pareto_mean(const BoundedPareto& d) {
  const double a = d.shape, lo = d.min, hi = d.max;
  if (std::abs(a - 1.0) < 1e-12) {
    return lo * hi / (hi - lo) * std::log(hi / lo);
  }
  const double norm = 1.0 - std::pow(lo / hi, a);
  return a * std::pow(lo, a) / norm * (std::pow(lo, 1.0 - a) - std::pow(hi, 1.0 - a)) / (a - 1.0);
}

double compute_mean(const SizeDistribution::Variant& v) {
  return std::visit(
      Overloaded{
          [](const Deterministic& d) {
            if (!(d.value > 0.0) || !std::isfinite(d.value)) {
              throw InvalidInput("deterministic size must be positive");
            }
            return d.value;
          },
          [](const Exponential& d) {
            if (!(d.mean > 0.0) || !std::isfinite(d.mean)) {
              throw InvalidInput("exponential mean must be positive");
            }
            return d.mean;
          },
          [](const BoundedPareto& d) {
            if (!(d.shape > 0.0) || !(d.min > 0.0) || !(d.max > d.min) || !std::isfinite(d.max)) {
              throw InvalidInput("bounded pareto needs shape > 0 and 0 < min < max < inf");
            }
            return bounded_pareto_mean(d);
          },
          [](const Weibull& d) {
            if (!(d.shape > 0.0) || !(d.scale > 0.0) || !std::isfinite(d.scale)) {
              throw InvalidInput("weibull needs shape > 0 and scale > 0");
            }
            return d.scale * std::tgamma(1.0 + 1.0 / d.shape);
          },
      },
      v);
}

}  // namespace

SizeDistribution::SizeDistribution(Variant v) : v_(std::move(v)), mean_(compute_mean(v_)) {
  if (!std::isfinite(mean_) || mean_ <= 0.0) {
    throw InvalidInput("size distribution has no finite positive mean");
  }
}

double SizeDistribution::sample(std::mt19937_64& rng) const {
  return std::visit(
      Overloaded{
          [](const Deterministic& d) { return d.value; },
          [&](const Exponential& d) { return d.mean * exponential_draw(rng); },
          [&](const BoundedPareto& d) {
            const double u = open_uniform(rng);
            const double tail = std::pow(d.min / d.max, d.shape);
            return d.min * std::pow(1.0 - u * (1.0 - tail), -1.0 / d.shape);
          },
          [&](const Weibull& d) {
            return d.scale * std::pow(exponential_draw(rng), 1.0 / d.shape);
          },
      },
      v_);
}

WorkloadSpec::WorkloadSpec(std::vector<JobType> types, double budget, ArrivalProcess arrivals)
    : types_(std::move(types)), budget_(budget), arrivals_(arrivals) {
  if (types_.empty()) {
    throw InvalidInput("workload needs at least one job type");
  }
  for (const auto& t : types_) {
    if (!(t.arrival_rate > 0.0) || !std::isfinite(t.arrival_rate)) {
      throw InvalidInput("job type '" + t.name + "': arrival_rate must be positive");
    }
  }
  if (!(budget_ > 0.0) || !std::isfinite(budget_)) {
    throw InvalidInput("budget must be positive");
  }
}

double WorkloadSpec::total_arrival_rate() const noexcept {
  double sum = 0.0;
  for (const auto& t : types_) sum += t.arrival_rate;
  return sum;
}

double WorkloadSpec::total_load() const noexcept {
  double sum = 0.0;
  for (const auto& t : types_) sum += t.load();
  return sum;
}

std::vector<double> WorkloadSpec::loads() const {
  std::vector<double> out;
  out.reserve(types_.size());
  for (const auto& t : types_) out.push_back(t.load());
  return out;
}

void WorkloadSpec::require_stable() const {
  const double load = total_load();
  if (!(load < budget_)) {
    throw InstabilityError("unstable workload: total load " + std::to_string(load) +
                               " is not below budget " + std::to_string(budget_),
                           load, budget_);
  }
}

WorkloadSpec WorkloadSpec::with_budget(double budget) const {
  return WorkloadSpec(types_, budget, arrivals_);
}

Trace generate_trace(const WorkloadSpec& spec, std::size_t job_count, std::uint64_t seed) {
  Trace trace;
  trace.seed = seed;
  trace.events.reserve(job_count);
  if (job_count == 0) return trace;

  std::mt19937_64 rng(seed);
  const bool poisson = spec.arrivals() == ArrivalProcess::Poisson;
  auto gap = [&](std::size_t i) {
    const double rate = spec.type(i).arrival_rate;
    return poisson ? exponential_draw(rng) / rate : 1.0 / rate;
  };

  using Pending = std::pair<double, std::size_t>;  // (next arrival, type)
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> next;
  for (std::size_t i = 0; i < spec.size(); ++i) next.emplace(gap(i), i);

  while (trace.events.size() < job_count) {
    auto [t, i] = next.top();
    next.pop();
    trace.events.push_back({t, i, spec.type(i).size_dist.sample(rng)});
    next.emplace(t + gap(i), i);
  }
  return trace;
}

std::vector<TypeLoadEstimate> empirical_loads(const Trace& trace, const WorkloadSpec& spec) {
  if (trace.empty()) {
    throw InvalidInput("empirical loads need a non-empty trace");
  }
  const double horizon = trace.events.back().arrival_time;
  if (!(horizon > 0.0)) {
    throw InvalidInput("empirical loads undefined: last arrival time is 0");
  }
  std::vector<TypeLoadEstimate> out(spec.size());
  std::vector<double> work(spec.size(), 0.0);
  for (const auto& e : trace.events) {
    if (e.type_index >= spec.size()) {
      throw InvalidInput("trace references job type " + std::to_string(e.type_index) +
                         " but spec has " + std::to_string(spec.size()));
    }
    ++out[e.type_index].count;
    work[e.type_index] += e.size;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& est = out[i];
    if (est.count == 0) continue;
    est.arrival_rate = static_cast<double>(est.count) / horizon;
    est.mean_size = work[i] / static_cast<double>(est.count);
    est.load = est.arrival_rate * est.mean_size;
  }
  return out;
}

void check_trace(const Trace& trace, const WorkloadSpec& spec) {
  double prev = 0.0;
  for (std::size_t j = 0; j < trace.events.size(); ++j) {
    const auto& e = trace.events[j];
    if (!(e.arrival_time >= prev) || !std::isfinite(e.arrival_time)) {
      throw InvalidInput("trace event " + std::to_string(j) + " is out of order");
    }
    if (!(e.size > 0.0) || !std::isfinite(e.size)) {
      throw InvalidInput("trace event " + std::to_string(j) + " has non-positive size");
    }
    if (e.type_index >= spec.size()) {
      throw InvalidInput("trace event " + std::to_string(j) + " references job type " +
                         std::to_string(e.type_index) + " but spec has " +
                         std::to_string(spec.size()));
    }
    prev = e.arrival_time;
  }
}

}  // namespace rental
