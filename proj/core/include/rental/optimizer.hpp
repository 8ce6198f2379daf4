#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rental/speedup.hpp"
#include "rental/workload.hpp"

namespace rental {

struct SolverConfig {
  double k_max = 1048576.0;  // 2^20, cap on any k_i
  double budget_tol = 1e-9;  // relative feasibility tolerance
  double bisect_tol = 1e-12; // relative width of the multiplier bracket
  double inner_tol = 1e-12;  // relative width of the k bracket in the 1-D search

  /// Throws InvalidInput unless every tolerance is positive and k_max >= 1.
  void check() const;
};

/// Fixed-width allocation: every type-i job runs on ks[i] GPUs from arrival
/// to completion.
struct Allocation {
  std::vector<double> ks;
  double objective = 0.0;    // predicted mean response time, hours
  double budget_used = 0.0;  // time-average GPUs
  double multiplier = 0.0;   // Lagrange multiplier on the budget; 0 if slack
  bool cap_active = false;   // some k_i sits at k_max
};

/// Mean response time of a fixed-width policy: (1/lambda) * sum rho_i / s_i(k_i).
double objective(const WorkloadSpec& spec, std::span<const double> ks);

/// Time-average GPUs of a fixed-width policy: sum rho_i k_i / s_i(k_i).
double budget_usage(const WorkloadSpec& spec, std::span<const double> ks);

/// Fills objective and budget_used from ks.
Allocation make_allocation(const WorkloadSpec& spec, std::vector<double> ks, double multiplier,
                           double k_max);

/**
 * Minimizes g(k) = (1 + mu k) / s(k) over [1, k_max].
 *
 * Golden-section search in log k (bracket narrowed to inner_tol), followed by
 * a bisection for the smallest k whose g-value equals the minimum found, so
 * flat regions resolve to the narrowest width.
 */
double inner_minimize(const SpeedupFunction& f, double mu, const SolverConfig& cfg = {});

/**
 * Optimal fixed-width allocation under the time-average budget.
 *
 * Minimizes sum rho_i / s_i(k_i) subject to sum rho_i k_i / s_i(k_i) <= b.
 * The program is separable, so for a multiplier mu each type is solved
 * independently by inner_minimize; the budget used by those minimizers is
 * non-increasing in mu and an outer bisection finds the multiplier at which
 * the budget binds. If the mu = 0 solution already fits, it is returned with
 * cap_active set.
 *
 * Throws InstabilityError when total load >= b and ValidationError when a
 * speedup function fails monotonicity, sub-linearity or concavity.
 */
Allocation solve_allocation(const WorkloadSpec& spec, const SolverConfig& cfg = {});

/**
 * Grid-search oracle for solve_allocation.
 *
 * Each k_i ranges over a geometric grid 1, (1+step), (1+step)^2, ... up to the
 * largest width that still fits the budget when every other type runs on one
 * GPU. The best feasible grid point is found exhaustively; the last coordinate
 * is then pushed to the budget boundary. Limited to at most four job types.
 */
Allocation brute_force_allocation(const WorkloadSpec& spec, double grid_step = 1e-3,
                                  double k_max = 1048576.0);

/// Time-weighted average width of two segments run at k1 for t1 and k2 for t2.
double merge_segments(double k1, double t1, double k2, double t2);

struct FrontierPoint {
  double budget = 0.0;
  std::optional<Allocation> allocation;  // empty when the solve failed
  std::string error;
};

/// One solve per budget, sorted by budget. Failed points carry an error
/// message instead of aborting the sweep. threads == 0 uses sweep_threads().
std::vector<FrontierPoint> pareto_frontier(const WorkloadSpec& spec,
                                           std::span<const double> budgets,
                                           const SolverConfig& cfg = {}, unsigned threads = 0);

/// Worker count for sweeps: RENTAL_THREADS if set and positive, otherwise the
/// hardware concurrency.
unsigned sweep_threads();

}  // namespace rental
