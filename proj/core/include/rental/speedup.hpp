#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rental {

/// Amdahl's law: s(k) = 1 / ((1 - p) + p / k).
struct Amdahl {
  double parallel_fraction;
  bool operator==(const Amdahl&) const = default;
};

/// s(k) = k^alpha.
struct PowerLaw {
  double alpha;
  bool operator==(const PowerLaw&) const = default;
};

struct SpeedupPoint {
  double gpus;
  double speed;
  bool operator==(const SpeedupPoint&) const = default;
};

/// Piecewise-linear speedup through the knots, held constant outside them.
struct Tabular {
  std::vector<SpeedupPoint> points;
  bool operator==(const Tabular&) const = default;
};

/**
 * A speedup function s(k): a job of size x on k GPUs finishes in x / s(k).
 *
 * Construction checks structure only (parameter ranges, knot ordering).
 * Whether the function satisfies the monotonicity / sub-linearity /
 * concavity axioms is answered by validate(). Values are immutable.
 */
class SpeedupFunction {
 public:
  using Variant = std::variant<Amdahl, PowerLaw, Tabular>;

  /// Throws InvalidInput on a structural problem.
  SpeedupFunction(Variant v);

  static SpeedupFunction amdahl(double p) { return SpeedupFunction(Amdahl{p}); }
  static SpeedupFunction power(double alpha) { return SpeedupFunction(PowerLaw{alpha}); }
  static SpeedupFunction tabular(std::vector<SpeedupPoint> pts) {
    return SpeedupFunction(Tabular{std::move(pts)});
  }

  /// s(k) for k >= 1. Throws DomainError otherwise.
  double eval(double k) const;

  /// GPU-hours per unit of work at width k: k / s(k).
  double cost_rate(double k) const;

  /// s(k) extended below one GPU as k * s(1); used only by dynamic baselines
  /// that can hand a job a fractional share of a GPU.
  double eval_extended(double k) const;

  const Variant& variant() const noexcept { return v_; }

  /// Short human-readable form, e.g. "amdahl(p=0.8)".
  std::string describe() const;

  friend bool operator==(const SpeedupFunction&, const SpeedupFunction&) = default;

 private:
  double eval_unchecked(double k) const;

  Variant v_;
};

struct AxiomCheck {
  bool passed = true;
  /// First pair (k1, k2) with k1 < k2 that violates the axiom. For the
  /// concavity check this is the outer pair of the violating triple.
  std::optional<std::pair<double, double>> first_violation;
};

struct ValidationReport {
  AxiomCheck monotone;
  AxiomCheck sublinear;
  AxiomCheck concave;
  /// s(1) as evaluated; a deviation from 1 above the tolerance is a warning.
  double speed_at_one = 1.0;
  bool normalized = true;

  /// Axioms the optimizer relies on. Normalization is advisory.
  bool ok() const noexcept { return monotone.passed && sublinear.passed && concave.passed; }
};

struct ValidationOptions {
  double k_max = 1048576.0;  // 2^20
  double growth = 1.1;
  double rel_tol = 1e-9;
};

/// Grid check of the speedup axioms: geometric k grid from 1 up to k_max plus
/// every tabular knot. Knots are examined before the grid, so a tabular
/// violation is reported at the knot pair that exhibits it.
ValidationReport validate(const SpeedupFunction& f, const ValidationOptions& opts = {});

}  // namespace rental
