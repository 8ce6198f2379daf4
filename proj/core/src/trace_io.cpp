#include "rental/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "rental/errors.hpp"
#include "rental/serialize.hpp"

namespace rental {

namespace {

constexpr std::string_view kHeader = "arrival_time,type,size";

template <class T>
T parse_field(std::string_view field, std::size_t line, const char* name) {
  T value{};
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw ParseError("invalid " + std::string(name) + " '" + std::string(field) + "'", line);
  }
  return value;
}

}  // namespace

void write_trace(const Trace& trace, std::ostream& out) {
  out << kHeader << '\n';
  for (const auto& e : trace.events) {
    out << format_exact(e.arrival_time) << ',' << e.type_index << ',' << format_exact(e.size)
        << '\n';
  }
}

void write_trace(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_trace(trace, out);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Trace read_trace(std::istream& in) {
  Trace trace;
  std::string raw;
  std::size_t line = 0;
  bool header_seen = false;
  double prev_time = 0.0;

  while (std::getline(in, raw)) {
    ++line;
    std::string_view row(raw);
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    if (row.empty()) continue;
    if (!header_seen) {
      if (row != kHeader) {
        throw ParseError("expected header '" + std::string(kHeader) + "'", line);
      }
      header_seen = true;
      continue;
    }

    const auto c1 = row.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : row.find(',', c1 + 1);
    if (c2 == std::string_view::npos || row.find(',', c2 + 1) != std::string_view::npos) {
      throw ParseError("expected 3 comma-separated fields", line);
    }
    TraceEvent e{};
    e.arrival_time = parse_field<double>(row.substr(0, c1), line, "arrival_time");
    e.type_index = parse_field<std::size_t>(row.substr(c1 + 1, c2 - c1 - 1), line, "type");
    e.size = parse_field<double>(row.substr(c2 + 1), line, "size");

    if (!std::isfinite(e.arrival_time) || e.arrival_time < 0.0) {
      throw ParseError("arrival_time must be finite and non-negative", line);
    }
    if (!std::isfinite(e.size) || e.size <= 0.0) {
      throw ParseError("size must be positive", line);
    }
    if (e.arrival_time < prev_time) {
      throw ParseError("trace is not sorted by arrival_time", line);
    }
    prev_time = e.arrival_time;
    trace.events.push_back(e);
  }
  if (!header_seen) throw ParseError("missing header '" + std::string(kHeader) + "'", 1);
  return trace;
}

Trace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trace '" + path.string() + "'");
  return read_trace(in);
}

}  // namespace rental
