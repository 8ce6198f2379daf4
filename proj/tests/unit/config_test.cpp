#include "rental/config.hpp"

#include <gtest/gtest.h>

#include "rental/errors.hpp"

namespace rental {
namespace {

using nlohmann::json;

json two_type_doc() {
  return json::parse(R"({
    "budget": 2,
    "types": [
      {"name": "amdahl", "arrival_rate": 0.4,
       "speedup": {"kind": "amdahl", "p": 0.8},
       "size_dist": {"kind": "exponential", "mean": 1}},
      {"name": "sqrt", "arrival_rate": 0.4,
       "speedup": {"kind": "power", "alpha": 0.5},
       "size_dist": {"kind": "exponential", "mean": 1}}
    ]})");
}

std::string parse_error(const json& doc) {
  try {
    parse_workload(doc);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, ParsesTwoType) {
  const auto spec = parse_workload(two_type_doc());
  EXPECT_EQ(spec.size(), 2u);
  EXPECT_DOUBLE_EQ(spec.budget(), 2.0);
  EXPECT_EQ(spec.type(0).speedup, SpeedupFunction::amdahl(0.8));
  EXPECT_EQ(spec.type(1).name, "sqrt");
  EXPECT_DOUBLE_EQ(spec.total_load(), 0.8);
  EXPECT_EQ(spec.arrivals(), ArrivalProcess::Poisson);
}

TEST(Config, AllKinds) {
  const auto spec = parse_workload(json::parse(R"({
    "budget": 50, "arrivals": "deterministic",
    "types": [
      {"arrival_rate": 1, "speedup": {"kind": "tabular", "points": [[1,1],[2,1.8],[4,3]]},
       "size_dist": {"kind": "deterministic", "value": 2}},
      {"arrival_rate": 1, "speedup": {"kind": "power", "alpha": 0.5},
       "size_dist": {"kind": "bounded_pareto", "shape": 1.5, "min": 1, "max": 100}},
      {"arrival_rate": 1, "speedup": {"kind": "amdahl", "p": 0.5},
       "size_dist": {"kind": "weibull", "shape": 2, "scale": 1}}
    ]})"));
  EXPECT_EQ(spec.arrivals(), ArrivalProcess::Deterministic);
  EXPECT_EQ(spec.type(0).name, "type0");
  EXPECT_DOUBLE_EQ(spec.type(0).speedup.eval(3.0), 2.4);
}

TEST(Config, RoundTripsThroughJson) {
  const auto spec = parse_workload(two_type_doc());
  const auto again = parse_workload(to_json(spec));
  EXPECT_EQ(to_json(again), to_json(spec));
}

TEST(Config, ErrorsNameTheField) {
  auto doc = two_type_doc();
  doc["types"][1]["speedup"].erase("alpha");
  EXPECT_EQ(parse_error(doc), "types[1].speedup.alpha: missing");

  doc = two_type_doc();
  doc["types"][0]["speedup"]["p"] = 1.5;
  EXPECT_NE(parse_error(doc).find("types[0].speedup"), std::string::npos);

  doc = two_type_doc();
  doc["types"][0]["size_dist"]["kind"] = "lognormal";
  EXPECT_NE(parse_error(doc).find("types[0].size_dist.kind"), std::string::npos);

  doc = two_type_doc();
  doc["budget"] = "two";
  EXPECT_EQ(parse_error(doc), "workload.budget: expected a number");

  doc = two_type_doc();
  doc["types"] = json::array();
  EXPECT_NE(parse_error(doc), "");

  doc = two_type_doc();
  doc["types"][0]["speedup"] = {{"kind", "tabular"}, {"points", {{1, 1}, {1, 2}}}};
  EXPECT_NE(parse_error(doc).find("types[0].speedup"), std::string::npos);
}

TEST(Config, MissingFile) {
  EXPECT_THROW(load_workload("/nonexistent/spec.json"), IoError);
}

}  // namespace
}  // namespace rental
