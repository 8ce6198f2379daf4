#include "rental/trace_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "reference.hpp"
#include "rental/errors.hpp"

namespace rental {
namespace {

Trace parse(const std::string& text) {
  std::istringstream in(text);
  return read_trace(in);
}

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "expected a parse error";
  return 0;
}

TEST(TraceIo, ParsesSingleRow) {
  const auto t = parse("arrival_time,type,size\n0.5,0,1.25");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.events[0], (TraceEvent{0.5, 0, 1.25}));
  EXPECT_EQ(t.seed, 0u);
}

TEST(TraceIo, ToleratesCrlfAndBlankLines) {
  const auto t = parse("arrival_time,type,size\r\n0.5,1,2\r\n\n1,0,3\n");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.events[1], (TraceEvent{1.0, 0, 3.0}));
}

TEST(TraceIo, ErrorsNameTheLine) {
  EXPECT_EQ(error_line("arrival_time,type,size\n1,0,1\n2,0,1\n1.5,0,1\n"), 4u);
  EXPECT_EQ(error_line("arrival_time,type,size\n1,0,-1\n"), 2u);
  EXPECT_EQ(error_line("arrival_time,type,size\n1,0,0\n"), 2u);
  EXPECT_EQ(error_line("arrival_time,type,size\n1,0\n"), 2u);
  EXPECT_EQ(error_line("arrival_time,type,size\n1,0,1,2\n"), 2u);
  EXPECT_EQ(error_line("arrival_time,type,size\n1,x,1\n"), 2u);
  EXPECT_EQ(error_line("arrival_time,type,size\n1,0,1\n2,-1,1\n"), 3u);
  EXPECT_EQ(error_line("time,type,size\n1,0,1\n"), 1u);
  EXPECT_EQ(error_line("arrival_time,type,size\n-1,0,1\n"), 2u);
}

TEST(TraceIo, EmptyInputNeedsHeader) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_TRUE(parse("arrival_time,type,size\n").empty());
}

TEST(TraceIo, MissingFileIsIoError) {
  EXPECT_THROW(read_trace(std::filesystem::path("/nonexistent/trace.csv")), IoError);
}

// read(write(t)) is the identity, including through a file.
TEST(TraceIo, RoundTripGeneratedTrace) {
  const auto spec = testing::two_type_spec();
  const auto trace = generate_trace(spec, 100'000, 17);
  const auto path = std::filesystem::temp_directory_path() / "rental_roundtrip.csv";
  write_trace(trace, path);
  const auto back = read_trace(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.events, trace.events);
}

TEST(TraceIo, RoundTripAwkwardValues) {
  Trace t;
  t.events = {{0.0, 0, 5e-324}, {0.1, 3, 1e300}, {0.1, 2, 0.30000000000000004},
              {1.0 / 3.0, 1, 2.0 / 3.0}};
  std::stringstream s;
  write_trace(t, s);
  EXPECT_EQ(read_trace(s).events, t.events);
}

}  // namespace
}  // namespace rental
