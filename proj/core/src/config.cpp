#include "rental/config.hpp"

#include <fstream>
#include <string>

#include "rental/errors.hpp"

namespace rental {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const json& field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + "." + key + ": missing");
  return *it;
}

double number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number()) throw ParseError(where + "." + key + ": expected a number");
  return v.get<double>();
}

std::string kind_of(const json& obj, const std::string& where) {
  const json& v = field(obj, "kind", where);
  if (!v.is_string()) throw ParseError(where + ".kind: expected a string");
  return v.get<std::string>();
}

// Structural errors from constructors are reported against the field path.
template <class F>
auto with_context(const std::string& where, F&& make) {
  try {
    return make();
  } catch (const InvalidInput& e) {
    throw ParseError(where + ": " + e.what());
  }
}

SpeedupFunction speedup_at(const json& doc, const std::string& where) {
  const std::string kind = kind_of(doc, where);
  if (kind == "amdahl") {
    const double p = number(doc, "p", where);
    return with_context(where, [&] { return SpeedupFunction::amdahl(p); });
  }
  if (kind == "power") {
    const double alpha = number(doc, "alpha", where);
    return with_context(where, [&] { return SpeedupFunction::power(alpha); });
  }
  if (kind == "tabular") {
    const json& pts = field(doc, "points", where);
    if (!pts.is_array()) throw ParseError(where + ".points: expected an array");
    std::vector<SpeedupPoint> points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const json& p = pts[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw ParseError(where + ".points[" + std::to_string(i) + "]: expected [k, s]");
      }
      points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return with_context(where, [&] { return SpeedupFunction::tabular(std::move(points)); });
  }
  throw ParseError(where + ".kind: unknown speedup kind '" + kind + "'");
}

SizeDistribution size_dist_at(const json& doc, const std::string& where) {
  const std::string kind = kind_of(doc, where);
  auto make = [&](SizeDistribution::Variant v) {
    return with_context(where, [&] { return SizeDistribution(std::move(v)); });
  };
  if (kind == "deterministic") return make(Deterministic{number(doc, "value", where)});
  if (kind == "exponential") return make(Exponential{number(doc, "mean", where)});
  if (kind == "bounded_pareto") {
    return make(BoundedPareto{number(doc, "shape", where), number(doc, "min", where),
                              number(doc, "max", where)});
  }
  if (kind == "weibull") {
    return make(Weibull{number(doc, "shape", where), number(doc, "scale", where)});
  }
  throw ParseError(where + ".kind: unknown size distribution kind '" + kind + "'");
}

}  // namespace

SpeedupFunction parse_speedup(const json& doc) { return speedup_at(doc, "speedup"); }

WorkloadSpec parse_workload(const json& doc) {
  if (!doc.is_object()) throw ParseError("workload: expected a JSON object");
  const json& types = field(doc, "types", "workload");
  if (!types.is_array() || types.empty()) {
    throw ParseError("workload.types: expected a non-empty array");
  }

  std::vector<JobType> out;
  for (std::size_t i = 0; i < types.size(); ++i) {
    const std::string where = "types[" + std::to_string(i) + "]";
    const json& t = types[i];
    std::string name = "type" + std::to_string(i);
    if (t.is_object() && t.contains("name")) {
      if (!t["name"].is_string()) throw ParseError(where + ".name: expected a string");
      name = t["name"].get<std::string>();
    }
    const double rate = number(t, "arrival_rate", where);
    if (!(rate > 0.0)) throw ParseError(where + ".arrival_rate: must be positive");
    out.push_back(JobType{name, speedup_at(field(t, "speedup", where), where + ".speedup"), rate,
                          size_dist_at(field(t, "size_dist", where), where + ".size_dist")});
  }

  const double budget = number(doc, "budget", "workload");
  if (!(budget > 0.0)) throw ParseError("workload.budget: must be positive");

  ArrivalProcess arrivals = ArrivalProcess::Poisson;
  if (doc.contains("arrivals")) {
    const json& a = doc["arrivals"];
    if (a == "poisson") {
      arrivals = ArrivalProcess::Poisson;
    } else if (a == "deterministic") {
      arrivals = ArrivalProcess::Deterministic;
    } else {
      throw ParseError("workload.arrivals: expected \"poisson\" or \"deterministic\"");
    }
  }
  return WorkloadSpec(std::move(out), budget, arrivals);
}

WorkloadSpec load_workload(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open workload config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return parse_workload(doc);
}

json to_json(const SpeedupFunction& f) {
  return std::visit(Overloaded{
                        [](const Amdahl& a) {
                          return json{{"kind", "amdahl"}, {"p", a.parallel_fraction}};
                        },
                        [](const PowerLaw& p) { return json{{"kind", "power"}, {"alpha", p.alpha}}; },
                        [](const Tabular& t) {
                          json pts = json::array();
                          for (const auto& p : t.points) pts.push_back({p.gpus, p.speed});
                          return json{{"kind", "tabular"}, {"points", pts}};
                        },
                    },
                    f.variant());
}

json to_json(const SizeDistribution& d) {
  return std::visit(
      Overloaded{
          [](const Deterministic& v) { return json{{"kind", "deterministic"}, {"value", v.value}}; },
          [](const Exponential& v) { return json{{"kind", "exponential"}, {"mean", v.mean}}; },
          [](const BoundedPareto& v) {
            return json{{"kind", "bounded_pareto"}, {"shape", v.shape}, {"min", v.min}, {"max", v.max}};
          },
          [](const Weibull& v) {
            return json{{"kind", "weibull"}, {"shape", v.shape}, {"scale", v.scale}};
          },
      },
      d.variant());
}

json to_json(const WorkloadSpec& spec) {
  json types = json::array();
  for (const auto& t : spec.types()) {
    types.push_back({{"name", t.name},
                     {"arrival_rate", t.arrival_rate},
                     {"speedup", to_json(t.speedup)},
                     {"size_dist", to_json(t.size_dist)}});
  }
  return json{{"budget", spec.budget()},
              {"arrivals", spec.arrivals() == ArrivalProcess::Poisson ? "poisson" : "deterministic"},
              {"types", types}};
}

}  // namespace rental
