#include "rental/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "rental/errors.hpp"
#include "rental/serialize.hpp"

namespace rental {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();
// Remaining work below this fraction of the job size counts as finished.
constexpr double kDoneTol = 1e-12;

// Change points of K(t): K holds `gpus` from `time` until the next entry.
struct Step {
  double time;
  double gpus;
};

struct Run {
  std::vector<JobRecord> jobs;  // canonical order
  std::vector<Step> steps;
  double gpu_hours = 0.0;
};

std::vector<std::size_t> canonical_order(const Trace& trace) {
  std::vector<std::size_t> order(trace.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = trace.events[a];
    const auto& y = trace.events[b];
    if (x.arrival_time != y.arrival_time) return x.arrival_time < y.arrival_time;
    if (x.type_index != y.type_index) return x.type_index < y.type_index;
    return x.size < y.size;
  });
  return order;
}

Run run_fixed(const Trace& trace, const WorkloadSpec& spec, const std::vector<double>& ks) {
  Run run;
  const auto order = canonical_order(trace);
  run.jobs.reserve(order.size());

  struct Delta {
    double time;
    double gpus;
    int jobs;
  };
  std::vector<Delta> deltas;
  deltas.reserve(2 * order.size());

  for (std::size_t j : order) {
    const auto& e = trace.events[j];
    const double k = ks[e.type_index];
    const double duration = e.size / spec.type(e.type_index).speedup.eval(k);
    JobRecord r;
    r.arrival = e.arrival_time;
    r.start = e.arrival_time;
    r.completion = e.arrival_time + duration;
    r.response = r.completion - r.arrival;
    r.gpu_hours = k * duration;
    r.work_done = e.size;
    r.type_index = e.type_index;
    run.jobs.push_back(r);
    deltas.push_back({r.arrival, k, 1});
    deltas.push_back({r.completion, -k, -1});
  }
  std::stable_sort(deltas.begin(), deltas.end(),
                   [](const Delta& a, const Delta& b) { return a.time < b.time; });

  double gpus = 0.0;
  long active = 0;
  for (std::size_t i = 0; i < deltas.size();) {
    const double t = deltas[i].time;
    if (!run.steps.empty()) run.gpu_hours += run.steps.back().gpus * (t - run.steps.back().time);
    for (; i < deltas.size() && deltas[i].time == t; ++i) {
      gpus += deltas[i].gpus;
      active += deltas[i].jobs;
    }
    if (active == 0) gpus = 0.0;
    run.steps.push_back({t, gpus});
  }
  return run;
}

struct Active {
  std::size_t record;
  std::size_t type;
  double size;
  double remaining;
  double alloc = 0.0;
  double speed = 0.0;
  bool started = false;
};

// Shares a pool among present jobs for the dynamic baselines.
template <class Allocate>
Run run_dynamic(const Trace& trace, const WorkloadSpec& spec, Allocate&& allocate) {
  Run run;
  const auto order = canonical_order(trace);
  run.jobs.resize(order.size());

  std::vector<Active> active;
  std::size_t next = 0;
  double now = 0.0;
  double gpus = 0.0;

  auto replan = [&] {
    allocate(active);
    gpus = 0.0;
    for (auto& a : active) {
      a.speed = a.alloc > 0.0 ? spec.type(a.type).speedup.eval_extended(a.alloc) : 0.0;
      if (a.alloc > 0.0 && !a.started) {
        a.started = true;
        run.jobs[a.record].start = now;
      }
      gpus += a.alloc;
    }
    if (active.empty()) gpus = 0.0;
    run.steps.push_back({now, gpus});
  };

  while (next < order.size() || !active.empty()) {
    double dt_done = kInf;
    std::size_t first_done = 0;
    for (std::size_t i = 0; i < active.size(); ++i) {
      if (active[i].speed > 0.0) {
        const double dt = active[i].remaining / active[i].speed;
        if (dt < dt_done) {
          dt_done = dt;
          first_done = i;
        }
      }
    }
    const double t_arrival = next < order.size() ? trace.events[order[next]].arrival_time : kInf;
    const double t_done = now + dt_done;
    if (t_arrival == kInf && dt_done == kInf) {
      throw Error("simulation stalled: jobs present but no GPUs allocated");
    }
    const bool completes = t_done <= t_arrival;
    const double t_event = completes ? t_done : t_arrival;

    const double dt = t_event - now;
    for (auto& a : active) {
      const double work = a.speed * dt;
      a.remaining -= work;
      auto& r = run.jobs[a.record];
      r.work_done += work;
      r.gpu_hours += a.alloc * dt;
    }
    run.gpu_hours += gpus * dt;
    now = t_event;

    if (completes) {
      active[first_done].remaining = 0.0;
      std::erase_if(active, [&](const Active& a) {
        if (a.remaining > kDoneTol * a.size) return false;
        auto& r = run.jobs[a.record];
        r.completion = now;
        r.response = now - r.arrival;
        return true;
      });
    }
    while (next < order.size() && trace.events[order[next]].arrival_time <= now) {
      const auto& e = trace.events[order[next]];
      auto& r = run.jobs[next];
      r.arrival = e.arrival_time;
      r.type_index = e.type_index;
      active.push_back({next, e.type_index, e.size, e.size});
      ++next;
    }
    replan();
  }
  return run;
}

Run execute(const Trace& trace, const WorkloadSpec& spec, const Policy& policy) {
  check_policy(policy, spec);
  check_trace(trace, spec);
  return std::visit(
      Overloaded{
          [&](const FixedWidth& p) { return run_fixed(trace, spec, p.ks); },
          [&](const UniformWidth& p) {
            return run_fixed(trace, spec, std::vector<double>(spec.size(), p.k));
          },
          [&](const StaticClusterEqualSplit& p) {
            return run_dynamic(trace, spec, [c = p.cluster](std::vector<Active>& jobs) {
              const double share = jobs.empty() ? 0.0 : c / static_cast<double>(jobs.size());
              for (auto& a : jobs) a.alloc = share;
            });
          },
          [&](const SmallestRemainingFirst& p) {
            return run_dynamic(trace, spec, [p](std::vector<Active>& jobs) {
              std::stable_sort(jobs.begin(), jobs.end(), [](const Active& a, const Active& b) {
                if (a.remaining != b.remaining) return a.remaining < b.remaining;
                return a.record < b.record;
              });
              double pool = p.cluster;
              for (auto& a : jobs) {
                a.alloc = std::min(p.k_cap, pool);
                pool -= a.alloc;
              }
            });
          },
      },
      policy);
}

}  // namespace

std::string describe(const Policy& policy) {
  return std::visit(Overloaded{
                        [](const FixedWidth& p) {
                          std::string s = "fixed:";
                          for (std::size_t i = 0; i < p.ks.size(); ++i) {
                            if (i) s += ',';
                            s += format_number(p.ks[i]);
                          }
                          return s;
                        },
                        [](const UniformWidth& p) { return "uniform:" + format_number(p.k); },
                        [](const StaticClusterEqualSplit& p) {
                          return "cluster:" + format_number(p.cluster);
                        },
                        [](const SmallestRemainingFirst& p) {
                          return "srf:" + format_number(p.cluster) + "," + format_number(p.k_cap);
                        },
                    },
                    policy);
}

void check_policy(const Policy& policy, const WorkloadSpec& spec) {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  std::visit(Overloaded{
                 [&](const FixedWidth& p) {
                   if (p.ks.size() != spec.size()) {
                     throw InvalidInput("fixed policy has " + std::to_string(p.ks.size()) +
                                        " widths but spec has " + std::to_string(spec.size()) +
                                        " job types");
                   }
                   for (double k : p.ks) {
                     if (!(k >= 1.0) || !std::isfinite(k)) {
                       throw InvalidInput("fixed policy widths must be >= 1");
                     }
                   }
                 },
                 [&](const UniformWidth& p) {
                   if (!(p.k >= 1.0) || !std::isfinite(p.k)) {
                     throw InvalidInput("uniform width must be >= 1");
                   }
                 },
                 [&](const StaticClusterEqualSplit& p) {
                   if (!positive(p.cluster)) throw InvalidInput("cluster size must be positive");
                 },
                 [&](const SmallestRemainingFirst& p) {
                   if (!positive(p.cluster) || !positive(p.k_cap)) {
                     throw InvalidInput("srf cluster size and k_cap must be positive");
                   }
                 },
             },
             policy);
}

SimMetrics simulate(const Trace& trace, const WorkloadSpec& spec, const Policy& policy,
                    const SimOptions& opts) {
  Run run = execute(trace, spec, policy);
  SimMetrics m;
  m.job_count = run.jobs.size();
  m.total_gpu_hours = run.gpu_hours;
  if (!run.jobs.empty()) {
    double sum = 0.0;
    for (const auto& r : run.jobs) {
      sum += r.response;
      m.horizon = std::max(m.horizon, r.completion);
    }
    m.mean_response_time = sum / static_cast<double>(run.jobs.size());
    m.time_avg_budget = m.total_gpu_hours / m.horizon;
  }
  if (opts.record_per_job) m.per_job = std::move(run.jobs);
  return m;
}

std::vector<PolicyResult> compare_policies(const Trace& trace, const WorkloadSpec& spec,
                                           std::span<const Policy> policies,
                                           const SimOptions& opts) {
  for (const auto& p : policies) check_policy(p, spec);
  std::vector<PolicyResult> out;
  out.reserve(policies.size());
  for (const auto& p : policies) out.push_back({p, simulate(trace, spec, p, opts)});
  return out;
}

std::vector<std::pair<double, double>> budget_timeseries(const Trace& trace,
                                                         const WorkloadSpec& spec,
                                                         const Policy& policy, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw InvalidInput("sample step must be positive");
  }
  const Run run = execute(trace, spec, policy);
  double horizon = 0.0;
  for (const auto& r : run.jobs) horizon = std::max(horizon, r.completion);

  const auto samples = static_cast<std::size_t>(std::ceil(horizon / step));
  std::vector<std::pair<double, double>> out;
  out.reserve(samples + 1);
  auto it = run.steps.begin();
  for (std::size_t j = 0; j <= samples; ++j) {
    const double t = static_cast<double>(j) * step;
    while (it != run.steps.end() && it->time <= t) ++it;
    out.emplace_back(t, it == run.steps.begin() ? 0.0 : std::prev(it)->gpus);
  }
  return out;
}

}  // namespace rental
