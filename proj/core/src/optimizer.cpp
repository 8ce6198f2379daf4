#include "rental/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <thread>

#include "rental/errors.hpp"

namespace rental {

namespace {

constexpr int kMaxIterations = 400;

void check_ks(const WorkloadSpec& spec, std::span<const double> ks) {
  if (ks.size() != spec.size()) {
    throw InvalidInput("allocation has " + std::to_string(ks.size()) + " widths but spec has " +
                       std::to_string(spec.size()) + " job types");
  }
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!(ks[i] >= 1.0)) {
      throw DomainError("k[" + std::to_string(i) + "] = " + std::to_string(ks[i]) + " is below 1");
    }
  }
}

void require_solvable(const WorkloadSpec& spec, double k_max) {
  ValidationOptions opts;
  opts.k_max = k_max;
  for (const auto& t : spec.types()) {
    const auto report = validate(t.speedup, opts);
    const char* axiom = !report.monotone.passed    ? "monotonicity"
                        : !report.sublinear.passed ? "sub-linearity"
                        : !report.concave.passed   ? "concavity"
                                                   : nullptr;
    if (axiom) {
      throw ValidationError("job type '" + t.name + "' (" + t.speedup.describe() + ") violates " +
                            axiom);
    }
  }
}

std::vector<double> inner_all(const WorkloadSpec& spec, double mu, const SolverConfig& cfg) {
  std::vector<double> ks;
  ks.reserve(spec.size());
  for (const auto& t : spec.types()) ks.push_back(inner_minimize(t.speedup, mu, cfg));
  return ks;
}

// Largest k in [1, k_max] with load * k / s(k) <= room; 0 if even k = 1 misses.
double widest_fitting(const SpeedupFunction& f, double load, double room, double k_max) {
  if (load * f.cost_rate(1.0) > room) return 0.0;
  if (load * f.cost_rate(k_max) <= room) return k_max;
  double lo = 1.0, hi = k_max;
  for (int it = 0; it < kMaxIterations && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (load * f.cost_rate(mid) <= room) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

void SolverConfig::check() const {
  if (!(k_max >= 1.0) || !std::isfinite(k_max)) throw InvalidInput("k_max must be >= 1");
  if (!(budget_tol > 0.0) || !(bisect_tol > 0.0) || !(inner_tol > 0.0)) {
    throw InvalidInput("solver tolerances must be positive");
  }
}

double objective(const WorkloadSpec& spec, std::span<const double> ks) {
  check_ks(spec, ks);
  double sum = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    sum += spec.type(i).load() / spec.type(i).speedup.eval(ks[i]);
  }
  return sum / spec.total_arrival_rate();
}

double budget_usage(const WorkloadSpec& spec, std::span<const double> ks) {
  check_ks(spec, ks);
  double sum = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    sum += spec.type(i).load() * spec.type(i).speedup.cost_rate(ks[i]);
  }
  return sum;
}

Allocation make_allocation(const WorkloadSpec& spec, std::vector<double> ks, double multiplier,
                           double k_max) {
  Allocation a;
  a.objective = objective(spec, ks);
  a.budget_used = budget_usage(spec, ks);
  a.multiplier = multiplier;
  a.cap_active = std::any_of(ks.begin(), ks.end(), [&](double k) { return k >= k_max; });
  a.ks = std::move(ks);
  return a;
}

double inner_minimize(const SpeedupFunction& f, double mu, const SolverConfig& cfg) {
  cfg.check();
  if (!(mu >= 0.0)) throw DomainError("multiplier must be non-negative");
  const double k_max = cfg.k_max;
  if (k_max == 1.0) return 1.0;

  auto width = [&](double u) { return std::clamp(std::exp(u), 1.0, k_max); };
  auto g = [&](double k) { return (1.0 + mu * k) / f.eval(k); };

  // Golden-section search over u = ln k keeps the bracket relative in k.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = std::log(k_max);
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double gc = g(width(c)), gd = g(width(d));
  for (int it = 0; it < kMaxIterations && (b - a) > cfg.inner_tol; ++it) {
    if (gc <= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(width(c));
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(width(d));
    }
  }

  double best = width(0.5 * (a + b));
  double g_best = g(best);
  for (double k : {1.0, k_max, width(a), width(b)}) {
    const double gk = g(k);
    if (gk < g_best) {
      best = k;
      g_best = gk;
    }
  }

  // Smallest k in [1, best] that ties the minimum. g is unimodal, so the
  // sub-level set is an interval and its left edge can be bisected. The tie
  // is exact: any slack would pull smooth minima left by ~sqrt(slack).
  const double level = g_best;
  if (g(1.0) <= level) return 1.0;
  double lo = 1.0, hi = best;
  for (int it = 0; it < kMaxIterations && hi - lo > 1e-15 * hi; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (g(mid) <= level) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

Allocation solve_allocation(const WorkloadSpec& spec, const SolverConfig& cfg) {
  cfg.check();
  spec.require_stable();
  require_solvable(spec, cfg.k_max);

  const double b = spec.budget();
  auto usage = [&](const std::vector<double>& ks) { return budget_usage(spec, ks); };

  std::vector<double> ks_lo = inner_all(spec, 0.0, cfg);
  if (usage(ks_lo) <= b * (1.0 + cfg.budget_tol)) {
    return make_allocation(spec, std::move(ks_lo), 0.0, cfg.k_max);
  }

  // Bracket [mu_lo, mu_hi] with usage(mu_lo) > b >= usage(mu_hi). As mu grows
  // every width falls toward 1, where usage is the total load, below b.
  double mu_lo = 0.0, mu_hi = 1.0;
  std::vector<double> ks_hi = inner_all(spec, mu_hi, cfg);
  for (int it = 0; usage(ks_hi) > b; ++it) {
    if (it == kMaxIterations) {
      throw Error("solver could not bracket the budget multiplier");
    }
    mu_lo = mu_hi;
    ks_lo = std::move(ks_hi);
    mu_hi *= 2.0;
    ks_hi = inner_all(spec, mu_hi, cfg);
  }

  for (int it = 0; it < kMaxIterations && mu_hi - mu_lo > cfg.bisect_tol * mu_hi; ++it) {
    const double mid = 0.5 * (mu_lo + mu_hi);
    auto ks_mid = inner_all(spec, mid, cfg);
    if (usage(ks_mid) > b) {
      mu_lo = mid;
      ks_lo = std::move(ks_mid);
    } else {
      mu_hi = mid;
      ks_hi = std::move(ks_mid);
    }
  }

  // The bracket leaves a sliver of unused budget (the inner minimizers are
  // only resolved to ~sqrt(eps), and tabular speedups jump between knots).
  // Walk the segment from the feasible widths toward the infeasible ones
  // until the budget binds.
  auto along = [&](double theta) {
    std::vector<double> ks(ks_hi.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
      ks[i] = std::max(1.0, ks_hi[i] + theta * (ks_lo[i] - ks_hi[i]));
    }
    return ks;
  };
  double th_lo = 0.0, th_hi = 1.0;
  std::vector<double> best = ks_hi;
  for (int it = 0; it < kMaxIterations && th_hi - th_lo > 1e-16; ++it) {
    const double mid = 0.5 * (th_lo + th_hi);
    auto ks = along(mid);
    const double used = usage(ks);
    if (used <= b) {
      th_lo = mid;
      best = std::move(ks);
      if (b - used <= 1e-3 * cfg.budget_tol * b) break;
    } else {
      th_hi = mid;
    }
  }
  return make_allocation(spec, std::move(best), mu_hi, cfg.k_max);
}

Allocation brute_force_allocation(const WorkloadSpec& spec, double grid_step, double k_max) {
  const std::size_t m = spec.size();
  if (m > 4) {
    throw InvalidInput("brute force oracle supports at most 4 job types, got " + std::to_string(m));
  }
  if (!(grid_step > 0.0)) throw InvalidInput("grid step must be positive");
  spec.require_stable();

  const double b = spec.budget();
  const auto loads = spec.loads();
  const double total = std::accumulate(loads.begin(), loads.end(), 0.0);

  // Per-type grids with tabulated cost (budget share) and value (rho / s).
  std::vector<std::vector<double>> grid(m), cost(m), value(m);
  std::vector<double> upper(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& f = spec.type(i).speedup;
    upper[i] = widest_fitting(f, loads[i], b - (total - loads[i]), k_max);
    for (double k = 1.0; k < upper[i]; k *= 1.0 + grid_step) grid[i].push_back(k);
    grid[i].push_back(upper[i]);
    for (double k : grid[i]) {
      cost[i].push_back(loads[i] * f.cost_rate(k));
      value[i].push_back(loads[i] / f.eval(k));
    }
  }

  // Given the remaining budget, the last type takes its widest fitting grid
  // point since its value term is non-increasing in k.
  const std::size_t last = m - 1;
  auto widest_index = [&](double room) -> std::ptrdiff_t {
    const auto& c = cost[last];
    return std::upper_bound(c.begin(), c.end(), room) - c.begin() - 1;
  };

  double best_value = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(m, 0), best_idx(m, 0);

  auto consider = [&](double spent, double acc) {
    const auto j = widest_index(b - spent);
    if (j < 0) return;
    const double v = acc + value[last][static_cast<std::size_t>(j)];
    if (v < best_value) {
      best_value = v;
      best_idx = idx;
      best_idx[last] = static_cast<std::size_t>(j);
    }
  };

  // Recurse over the leading coordinates; the innermost one sweeps with a
  // pointer into the last grid that only moves left as spending rises.
  auto recurse = [&](auto&& self, std::size_t dim, double spent, double acc) -> void {
    if (m == 1) {
      consider(spent, acc);
      return;
    }
    if (dim + 1 < last) {
      for (std::size_t j = 0; j < grid[dim].size(); ++j) {
        if (spent + cost[dim][j] > b) break;
        idx[dim] = j;
        self(self, dim + 1, spent + cost[dim][j], acc + value[dim][j]);
      }
      return;
    }
    std::ptrdiff_t ptr = static_cast<std::ptrdiff_t>(cost[last].size()) - 1;
    for (std::size_t j = 0; j < grid[dim].size(); ++j) {
      const double s = spent + cost[dim][j];
      if (s > b) break;
      while (ptr >= 0 && s + cost[last][static_cast<std::size_t>(ptr)] > b) --ptr;
      if (ptr < 0) break;
      const double v = acc + value[dim][j] + value[last][static_cast<std::size_t>(ptr)];
      if (v < best_value) {
        best_value = v;
        best_idx = idx;
        best_idx[dim] = j;
        best_idx[last] = static_cast<std::size_t>(ptr);
      }
    }
  };
  recurse(recurse, 0, 0.0, 0.0);

  if (!std::isfinite(best_value)) {
    throw Error("brute force found no feasible grid point");
  }

  std::vector<double> ks(m);
  double spent = 0.0;
  for (std::size_t i = 0; i < last; ++i) {
    ks[i] = grid[i][best_idx[i]];
    spent += cost[i][best_idx[i]];
  }
  ks[last] = std::max(grid[last][best_idx[last]],
                      widest_fitting(spec.type(last).speedup, loads[last], b - spent, k_max));
  return make_allocation(spec, std::move(ks), 0.0, k_max);
}

double merge_segments(double k1, double t1, double k2, double t2) {
  if (!(k1 >= 1.0) || !(k2 >= 1.0)) throw DomainError("segment widths must be >= 1");
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw InvalidInput("segment durations must be positive");
  const double total = t1 + t2;
  return k1 * (t1 / total) + k2 * (t2 / total);
}

unsigned sweep_threads() {
  if (const char* env = std::getenv("RENTAL_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<FrontierPoint> pareto_frontier(const WorkloadSpec& spec,
                                           std::span<const double> budgets,
                                           const SolverConfig& cfg, unsigned threads) {
  std::vector<FrontierPoint> out(budgets.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < budgets.size(); i = next++) {
      auto& pt = out[i];
      pt.budget = budgets[i];
      try {
        pt.allocation = solve_allocation(spec.with_budget(budgets[i]), cfg);
      } catch (const Error& e) {
        pt.error = e.what();
      }
    }
  };

  if (threads == 0) threads = sweep_threads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, budgets.size()));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const FrontierPoint& a, const FrontierPoint& b) { return a.budget < b.budget; });
  return out;
}

}  // namespace rental
