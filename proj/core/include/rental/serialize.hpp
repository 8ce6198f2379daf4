#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rental/optimizer.hpp"
#include "rental/simulator.hpp"
#include "rental/speedup.hpp"

namespace rental {

/// 12 significant digits; the format of every reported result.
std::string format_number(double v);

/// Shortest decimal that parses back to exactly v.
std::string format_exact(double v);

/// v rounded to 12 significant digits, for JSON output.
double round12(double v);

// JSON documents. Numbers are rounded to 12 significant digits.
nlohmann::json to_json(const Allocation& a);
nlohmann::json to_json(const SimMetrics& m);
nlohmann::json to_json(const ValidationReport& r);

// CSV emitters.

/// `budget,mean_response_time,k_1,...,k_M`; failed points print nan cells.
void write_frontier_csv(std::ostream& out, std::span<const FrontierPoint> points,
                        std::size_t type_count);

/// `arrival,completion,response,gpu_hours`
void write_per_job_csv(std::ostream& out, std::span<const JobRecord> jobs);

/// `t,K`
void write_timeseries_csv(std::ostream& out, std::span<const std::pair<double, double>> series);

/// `policy,job_count,mean_response_time,time_avg_budget,total_gpu_hours`
void write_comparison_csv(std::ostream& out, std::span<const PolicyResult> rows);

}  // namespace rental
