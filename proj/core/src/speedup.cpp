#include "rental/speedup.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "rental/errors.hpp"

namespace rental {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_structure(const Amdahl& a) {
  if (!std::isfinite(a.parallel_fraction) || a.parallel_fraction < 0.0 ||
      a.parallel_fraction > 1.0) {
    throw InvalidInput("amdahl: parallel fraction must lie in [0, 1]");
  }
}

void check_structure(const PowerLaw& p) {
  if (!std::isfinite(p.alpha) || p.alpha <= 0.0) {
    throw InvalidInput("power: exponent must be positive and finite");
  }
}

void check_structure(const Tabular& t) {
  if (t.points.empty()) {
    throw InvalidInput("tabular: at least one point is required");
  }
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    const auto& pt = t.points[i];
    if (!std::isfinite(pt.gpus) || pt.gpus < 1.0) {
      throw InvalidInput("tabular: point " + std::to_string(i) + " has k < 1");
    }
    if (!std::isfinite(pt.speed) || pt.speed <= 0.0) {
      throw InvalidInput("tabular: point " + std::to_string(i) + " has non-positive speed");
    }
    if (i > 0 && pt.gpus <= t.points[i - 1].gpus) {
      throw InvalidInput("tabular: points must have strictly increasing k (point " +
                         std::to_string(i) + ")");
    }
  }
}

bool exceeds(double lhs, double rhs, double rel_tol) {
  return lhs - rhs > rel_tol * std::max(std::abs(lhs), std::abs(rhs));
}

// Scans consecutive pairs of `ks`; records the first pair where `bad` holds.
void scan_pairs(const std::vector<double>& ks, const std::vector<double>& ss, AxiomCheck& out,
                const std::function<bool(double, double, double, double)>& bad) {
  if (!out.passed) return;
  for (std::size_t i = 1; i < ks.size(); ++i) {
    if (bad(ks[i - 1], ss[i - 1], ks[i], ss[i])) {
      out.passed = false;
      out.first_violation = std::make_pair(ks[i - 1], ks[i]);
      return;
    }
  }
}

void scan_triples(const std::vector<double>& ks, const std::vector<double>& ss, double rel_tol,
                  AxiomCheck& out) {
  if (!out.passed) return;
  for (std::size_t i = 2; i < ks.size(); ++i) {
    const double a = ks[i - 2], b = ks[i - 1], c = ks[i];
    const double chord = ss[i - 2] + (ss[i] - ss[i - 2]) * (b - a) / (c - a);
    if (exceeds(chord, ss[i - 1], rel_tol)) {
      out.passed = false;
      out.first_violation = std::make_pair(a, c);
      return;
    }
  }
}

void check_axioms(const SpeedupFunction& f, const std::vector<double>& ks, double rel_tol,
                  ValidationReport& report) {
  std::vector<double> ss(ks.size());
  std::transform(ks.begin(), ks.end(), ss.begin(), [&](double k) { return f.eval(k); });

  scan_pairs(ks, ss, report.monotone, [&](double, double s1, double, double s2) {
    return exceeds(s1, s2, rel_tol);
  });
  scan_pairs(ks, ss, report.sublinear, [&](double k1, double s1, double k2, double s2) {
    return exceeds(s2 / k2, s1 / k1, rel_tol);
  });
  scan_triples(ks, ss, rel_tol, report.concave);
}

}  // namespace

SpeedupFunction::SpeedupFunction(Variant v) : v_(std::move(v)) {
  std::visit([](const auto& alt) { check_structure(alt); }, v_);
}

double SpeedupFunction::eval_unchecked(double k) const {
  return std::visit(
      Overloaded{
          [k](const Amdahl& a) {
            const double p = a.parallel_fraction;
            return 1.0 / ((1.0 - p) + p / k);
          },
          [k](const PowerLaw& p) { return std::pow(k, p.alpha); },
          [k](const Tabular& t) {
            const auto& pts = t.points;
            if (k <= pts.front().gpus) return pts.front().speed;
            if (k >= pts.back().gpus) return pts.back().speed;
            auto hi = std::upper_bound(pts.begin(), pts.end(), k,
                                       [](double v, const SpeedupPoint& p) { return v < p.gpus; });
            auto lo = std::prev(hi);
            const double w = (k - lo->gpus) / (hi->gpus - lo->gpus);
            return lo->speed + w * (hi->speed - lo->speed);
          },
      },
      v_);
}

double SpeedupFunction::eval(double k) const {
  if (!(k >= 1.0) || !std::isfinite(k)) {
    throw DomainError("speedup evaluated at k = " + std::to_string(k) + " (requires k >= 1)");
  }
  return eval_unchecked(k);
}

double SpeedupFunction::cost_rate(double k) const { return k / eval(k); }

double SpeedupFunction::eval_extended(double k) const {
  if (!(k >= 0.0) || !std::isfinite(k)) {
    throw DomainError("extended speedup evaluated at k = " + std::to_string(k));
  }
  if (k < 1.0) return k * eval_unchecked(1.0);
  return eval_unchecked(k);
}

std::string SpeedupFunction::describe() const {
  char buf[64];
  return std::visit(
      Overloaded{
          [&](const Amdahl& a) {
            std::snprintf(buf, sizeof buf, "amdahl(p=%g)", a.parallel_fraction);
            return std::string(buf);
          },
          [&](const PowerLaw& p) {
            std::snprintf(buf, sizeof buf, "power(alpha=%g)", p.alpha);
            return std::string(buf);
          },
          [&](const Tabular& t) {
            std::snprintf(buf, sizeof buf, "tabular(%zu points)", t.points.size());
            return std::string(buf);
          },
      },
      v_);
}

ValidationReport validate(const SpeedupFunction& f, const ValidationOptions& opts) {
  if (!(opts.growth > 1.0) || !(opts.k_max >= 1.0)) {
    throw InvalidInput("validation grid needs growth > 1 and k_max >= 1");
  }
  ValidationReport report;
  report.speed_at_one = f.eval(1.0);
  report.normalized = std::abs(report.speed_at_one - 1.0) <= opts.rel_tol;

  std::vector<double> anchors{1.0};
  if (const auto* tab = std::get_if<Tabular>(&f.variant())) {
    for (const auto& p : tab->points) anchors.push_back(p.gpus);
    // One point past the last knot exposes the kink into the constant tail.
    anchors.push_back(2.0 * tab->points.back().gpus);
  }
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());

  std::vector<double> grid = anchors;
  for (double k = 1.0; k < opts.k_max;) {
    k = std::min(k * opts.growth, opts.k_max);
    grid.push_back(k);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  check_axioms(f, anchors, opts.rel_tol, report);
  check_axioms(f, grid, opts.rel_tol, report);
  return report;
}

}  // namespace rental
