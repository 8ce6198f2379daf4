#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "rental/workload.hpp"

namespace rental {

// Workload config document:
//
//   {
//     "budget": 2.0,
//     "arrivals": "poisson",            // optional: "poisson" | "deterministic"
//     "types": [
//       {"name": "amdahl-0.8",
//        "arrival_rate": 0.4,
//        "speedup":   {"kind": "amdahl", "p": 0.8},
//        "size_dist": {"kind": "exponential", "mean": 1.0}}
//     ]
//   }
//
// speedup kinds:   amdahl{p} | power{alpha} | tabular{points: [[k, s], ...]}
// size_dist kinds: deterministic{value} | exponential{mean}
//                  | bounded_pareto{shape, min, max} | weibull{shape, scale}

/// Throws ParseError naming the offending field, e.g. "types[1].speedup.p".
WorkloadSpec parse_workload(const nlohmann::json& doc);
WorkloadSpec load_workload(const std::filesystem::path& path);

SpeedupFunction parse_speedup(const nlohmann::json& doc);

nlohmann::json to_json(const SpeedupFunction& f);
nlohmann::json to_json(const SizeDistribution& d);
nlohmann::json to_json(const WorkloadSpec& spec);

}  // namespace rental
