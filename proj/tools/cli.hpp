#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rental/simulator.hpp"
#include "rental/workload.hpp"

namespace rental::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationFailed = 1;
inline constexpr int kUnstable = 2;
inline constexpr int kIoOrParse = 3;
inline constexpr int kInternal = 4;

/// Runs one subcommand. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// optimal | fixed:k1,...,kM | uniform:k | cluster:C | srf:C,kcap.
/// `optimal` solves for the spec's budget first.
Policy parse_policy(const std::string& text, const WorkloadSpec& spec);

}  // namespace rental::cli
