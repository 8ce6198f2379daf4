#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "rental/config.hpp"
#include "rental/errors.hpp"
#include "rental/optimizer.hpp"
#include "rental/serialize.hpp"
#include "rental/trace_io.hpp"

namespace rental::cli {

namespace fs = std::filesystem;

namespace {

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw InvalidInput("policy '" + what + "': bad number '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

// Writes via `emit` to `path`, or to `fallback` when path is empty.
void emit_to(const std::string& path, std::ostream& fallback,
             const std::function<void(std::ostream&)>& emit) {
  if (path.empty()) {
    emit(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  emit(file);
  if (!file) throw IoError("failed writing '" + path + "'");
}

std::string resolve(const std::string& path) {
  return path.empty() ? path : fs::absolute(path).lexically_normal().string();
}

void print_json(std::ostream& out, const nlohmann::json& doc) { out << doc.dump(2) << '\n'; }

struct Options {
  std::string spec;
  std::string trace;
  std::string out;
  std::string policy;
  std::vector<std::string> policies;
  std::string per_job;
  std::string series;
  double step = 0.1;
  double k_max = SolverConfig{}.k_max;
  std::size_t jobs = 0;
  std::uint64_t seed = 0;
  double b_min = 0.0;
  double b_max = 0.0;
  std::size_t points = 0;
};

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  cfg.k_max = o.k_max;
  return cfg;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const auto spec = load_workload(o.spec);
  bool axioms_ok = true;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto& t = spec.type(i);
    ValidationOptions vopts;
    vopts.k_max = o.k_max;
    const auto r = validate(t.speedup, vopts);
    auto verdict = [](const AxiomCheck& c) {
      if (c.passed) return std::string("ok");
      return "FAIL at (" + format_number(c.first_violation->first) + ", " +
             format_number(c.first_violation->second) + ")";
    };
    out << "type " << i << " '" << t.name << "' " << t.speedup.describe()
        << ": monotone " << verdict(r.monotone) << ", sublinear " << verdict(r.sublinear)
        << ", concave " << verdict(r.concave) << ", s(1) = " << format_number(r.speed_at_one)
        << (r.normalized ? "" : " (warning: not normalized)") << '\n';
    axioms_ok = axioms_ok && r.ok();
  }
  const bool stable = spec.is_stable();
  out << "stability: total load " << format_number(spec.total_load())
      << (stable ? " < " : " >= ") << "budget " << format_number(spec.budget()) << ": "
      << (stable ? "ok" : "FAIL") << '\n';
  if (!axioms_ok) return kValidationFailed;
  return stable ? kOk : kUnstable;
}

int cmd_solve(const Options& o, std::ostream& out) {
  const auto spec = load_workload(o.spec);
  const auto a = solve_allocation(spec, solver_config(o));
  emit_to(o.out, out, [&](std::ostream& s) { print_json(s, to_json(a)); });
  return kOk;
}

int cmd_gen_trace(const Options& o, std::ostream&) {
  const auto spec = load_workload(o.spec);
  write_trace(generate_trace(spec, o.jobs, o.seed), fs::path(o.out));
  return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const auto spec = load_workload(o.spec);
  const auto trace = read_trace(fs::path(o.trace));
  Policy policy = FixedWidth{};
  if (o.policy == "optimal") {
    policy = FixedWidth{solve_allocation(spec, solver_config(o)).ks};
  } else {
    policy = parse_policy(o.policy, spec);
  }
  SimOptions sim;
  sim.record_per_job = !o.per_job.empty();
  const auto m = simulate(trace, spec, policy, sim);

  auto doc = to_json(m);
  doc["policy"] = describe(policy);
  const std::vector<double>* widths = nullptr;
  std::vector<double> uniform;
  if (const auto* f = std::get_if<FixedWidth>(&policy)) {
    widths = &f->ks;
  } else if (const auto* u = std::get_if<UniformWidth>(&policy)) {
    uniform.assign(spec.size(), u->k);
    widths = &uniform;
  }
  if (widths) {
    doc["predicted"] = {{"mean_response_time", round12(objective(spec, *widths))},
                        {"time_avg_budget", round12(budget_usage(spec, *widths))}};
  }
  print_json(out, doc);

  if (m.per_job) {
    emit_to(o.per_job, out, [&](std::ostream& s) { write_per_job_csv(s, *m.per_job); });
  }
  if (!o.series.empty()) {
    const auto series = budget_timeseries(trace, spec, policy, o.step);
    emit_to(o.series, out, [&](std::ostream& s) { write_timeseries_csv(s, series); });
  }
  return kOk;
}

int cmd_pareto(const Options& o, std::ostream& out, std::ostream& err) {
  const auto spec = load_workload(o.spec);
  if (o.points == 0) throw InvalidInput("--points must be at least 1");
  if (!(o.b_max >= o.b_min)) throw InvalidInput("--b-max must not be below --b-min");
  std::vector<double> budgets;
  for (std::size_t j = 0; j < o.points; ++j) {
    const double frac = o.points == 1 ? 0.0 : static_cast<double>(j) / (o.points - 1);
    budgets.push_back(o.b_min + frac * (o.b_max - o.b_min));
  }
  const auto pts = pareto_frontier(spec, budgets, solver_config(o));
  std::size_t solved = 0;
  for (const auto& p : pts) {
    if (p.allocation) {
      ++solved;
    } else {
      err << "budget " << format_number(p.budget) << ": " << p.error << '\n';
    }
  }
  emit_to(o.out, out, [&](std::ostream& s) { write_frontier_csv(s, pts, spec.size()); });
  return solved > 0 ? kOk : kUnstable;
}

int cmd_compare(const Options& o, std::ostream& out) {
  const auto spec = load_workload(o.spec);
  const auto trace = read_trace(fs::path(o.trace));
  std::vector<Policy> policies;
  std::optional<Policy> optimal;
  for (const auto& group : o.policies) {
    std::stringstream ss(group);
    std::string item;
    while (std::getline(ss, item, ';')) {
      if (item.empty()) continue;
      if (item == "optimal") {
        if (!optimal) optimal = FixedWidth{solve_allocation(spec, solver_config(o)).ks};
        policies.push_back(*optimal);
      } else {
        policies.push_back(parse_policy(item, spec));
      }
    }
  }
  if (policies.empty()) throw InvalidInput("--policies lists no policy");
  const auto rows = compare_policies(trace, spec, policies);
  emit_to(o.out, out, [&](std::ostream& s) { write_comparison_csv(s, rows); });
  return kOk;
}

}  // namespace

Policy parse_policy(const std::string& text, const WorkloadSpec& spec) {
  if (text == "optimal") return FixedWidth{solve_allocation(spec).ks};
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidInput("unknown policy '" + text + "'");
  const std::string kind = text.substr(0, colon);
  const auto args = parse_numbers(text.substr(colon + 1), text);
  auto expect = [&](std::size_t n) {
    if (args.size() != n) {
      throw InvalidInput("policy '" + text + "' expects " + std::to_string(n) + " value(s)");
    }
  };
  Policy p = FixedWidth{};
  if (kind == "fixed") {
    p = FixedWidth{args};
  } else if (kind == "uniform") {
    expect(1);
    p = UniformWidth{args[0]};
  } else if (kind == "cluster") {
    expect(1);
    p = StaticClusterEqualSplit{args[0]};
  } else if (kind == "srf") {
    expect(2);
    p = SmallestRemainingFirst{args[0], args[1]};
  } else {
    throw InvalidInput("unknown policy kind '" + kind + "'");
  }
  check_policy(p, spec);
  return p;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Budget-constrained GPU rental planner and simulator", "rental"};
  app.require_subcommand(1);
  Options o;

  auto spec_opt = [&](CLI::App* sub) {
    sub->add_option("--spec", o.spec, "Workload config (JSON)")->required()->check(CLI::ExistingFile);
  };
  auto k_max_opt = [&](CLI::App* sub) {
    sub->add_option("--k-max", o.k_max, "Cap on GPUs per job")->check(CLI::PositiveNumber);
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check speedup axioms and stability");
  spec_opt(validate_cmd);
  k_max_opt(validate_cmd);

  auto* solve_cmd = app.add_subcommand("solve", "Optimal fixed-width allocation");
  spec_opt(solve_cmd);
  k_max_opt(solve_cmd);
  solve_cmd->add_option("--out", o.out, "Write the allocation JSON here instead of stdout");

  auto* gen_cmd = app.add_subcommand("gen-trace", "Generate a synthetic arrival trace");
  spec_opt(gen_cmd);
  gen_cmd->add_option("--jobs", o.jobs, "Number of jobs")->required();
  gen_cmd->add_option("--seed", o.seed, "RNG seed")->required();
  gen_cmd->add_option("--out", o.out, "Trace CSV path")->required();

  auto* sim_cmd = app.add_subcommand("simulate", "Replay a trace under a policy");
  spec_opt(sim_cmd);
  k_max_opt(sim_cmd);
  sim_cmd->add_option("--trace", o.trace, "Trace CSV")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--policy", o.policy,
                      "optimal | fixed:k1,...,kM | uniform:k | cluster:C | srf:C,kcap")
      ->required();
  sim_cmd->add_option("--per-job", o.per_job, "Per-job CSV output");
  sim_cmd->add_option("--budget-series", o.series, "K(t) CSV output");
  sim_cmd->add_option("--step", o.step, "Sample step for --budget-series (hours)")
      ->check(CLI::PositiveNumber);

  auto* pareto_cmd = app.add_subcommand("pareto", "Sweep budgets: mean response vs budget");
  spec_opt(pareto_cmd);
  k_max_opt(pareto_cmd);
  pareto_cmd->add_option("--b-min", o.b_min, "Smallest budget")->required();
  pareto_cmd->add_option("--b-max", o.b_max, "Largest budget")->required();
  pareto_cmd->add_option("--points", o.points, "Number of budgets")->required();
  pareto_cmd->add_option("--out", o.out, "Frontier CSV path (default stdout)");

  auto* compare_cmd = app.add_subcommand("compare", "Simulate several policies on one trace");
  spec_opt(compare_cmd);
  k_max_opt(compare_cmd);
  compare_cmd->add_option("--trace", o.trace, "Trace CSV")->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("--policies", o.policies,
                          "Policies, space- or ';'-separated (same forms as --policy)")
      ->required();
  compare_cmd->add_option("--out", o.out, "Comparison CSV path (default stdout)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kIoOrParse;
  }

  for (auto* path : {&o.spec, &o.trace, &o.out, &o.per_job, &o.series}) *path = resolve(*path);

  try {
    if (*validate_cmd) return cmd_validate(o, out);
    if (*solve_cmd) return cmd_solve(o, out);
    if (*gen_cmd) return cmd_gen_trace(o, out);
    if (*sim_cmd) return cmd_simulate(o, out);
    if (*pareto_cmd) return cmd_pareto(o, out, err);
    if (*compare_cmd) return cmd_compare(o, out);
  } catch (const ValidationError& e) {
    err << "validation failed: " << e.what() << '\n';
    return kValidationFailed;
  } catch (const InstabilityError& e) {
    err << "error: " << e.what() << '\n';
    return kUnstable;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoOrParse;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kIoOrParse;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << '\n';
    return kIoOrParse;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kIoOrParse;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}

}  // namespace rental::cli
