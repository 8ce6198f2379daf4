#pragma once

#include <filesystem>
#include <iosfwd>

#include "rental/workload.hpp"

namespace rental {

// CSV trace format: header `arrival_time,type,size`, one event per line, LF
// line endings. Numbers are written in shortest round-trip form, so
// read_trace(write_trace(t)) reproduces every event bit for bit.

void write_trace(const Trace& trace, std::ostream& out);
void write_trace(const Trace& trace, const std::filesystem::path& path);

/// Throws ParseError naming the offending line for malformed rows, unsorted
/// arrival times and non-positive sizes. The returned trace has seed 0.
Trace read_trace(std::istream& in);
Trace read_trace(const std::filesystem::path& path);

}  // namespace rental
