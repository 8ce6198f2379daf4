#include "rental/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

namespace rental {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_exact(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double round12(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_number(v).c_str(), nullptr);
}

json to_json(const Allocation& a) {
  json ks = json::array();
  for (double k : a.ks) ks.push_back(round12(k));
  return json{{"ks", ks},
              {"objective", round12(a.objective)},
              {"budget_used", round12(a.budget_used)},
              {"multiplier", round12(a.multiplier)},
              {"cap_active", a.cap_active}};
}

json to_json(const SimMetrics& m) {
  json doc{{"job_count", m.job_count},
           {"mean_response_time", nullptr},
           {"time_avg_budget", round12(m.time_avg_budget)},
           {"total_gpu_hours", round12(m.total_gpu_hours)},
           {"horizon", round12(m.horizon)}};
  if (m.mean_response_time) doc["mean_response_time"] = round12(*m.mean_response_time);
  return doc;
}

namespace {

json axiom_json(const AxiomCheck& c) {
  json doc{{"passed", c.passed}};
  if (c.first_violation) {
    doc["first_violation"] = {round12(c.first_violation->first), round12(c.first_violation->second)};
  }
  return doc;
}

}  // namespace

json to_json(const ValidationReport& r) {
  return json{{"monotone", axiom_json(r.monotone)},
              {"sublinear", axiom_json(r.sublinear)},
              {"concave", axiom_json(r.concave)},
              {"speed_at_one", round12(r.speed_at_one)},
              {"normalized", r.normalized},
              {"ok", r.ok()}};
}

void write_frontier_csv(std::ostream& out, std::span<const FrontierPoint> points,
                        std::size_t type_count) {
  out << "budget,mean_response_time";
  for (std::size_t i = 1; i <= type_count; ++i) out << ",k_" << i;
  out << '\n';
  for (const auto& p : points) {
    out << format_number(p.budget);
    if (p.allocation) {
      out << ',' << format_number(p.allocation->objective);
      for (double k : p.allocation->ks) out << ',' << format_number(k);
    } else {
      out << ",nan";
      for (std::size_t i = 0; i < type_count; ++i) out << ",nan";
    }
    out << '\n';
  }
}

void write_per_job_csv(std::ostream& out, std::span<const JobRecord> jobs) {
  out << "arrival,completion,response,gpu_hours\n";
  for (const auto& r : jobs) {
    out << format_number(r.arrival) << ',' << format_number(r.completion) << ','
        << format_number(r.response) << ',' << format_number(r.gpu_hours) << '\n';
  }
}

void write_timeseries_csv(std::ostream& out, std::span<const std::pair<double, double>> series) {
  out << "t,K\n";
  for (const auto& [t, k] : series) out << format_number(t) << ',' << format_number(k) << '\n';
}

void write_comparison_csv(std::ostream& out, std::span<const PolicyResult> rows) {
  out << "policy,job_count,mean_response_time,time_avg_budget,total_gpu_hours\n";
  for (const auto& row : rows) {
    const auto& m = row.metrics;
    // Policy text contains commas for fixed/srf, so quote it.
    out << '"' << describe(row.policy) << "\"," << m.job_count << ','
        << (m.mean_response_time ? format_number(*m.mean_response_time) : "nan") << ','
        << format_number(m.time_avg_budget) << ',' << format_number(m.total_gpu_hours) << '\n';
  }
}

}  // namespace rental
