// Copyright 2026 The evacnet Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evacnet/cli.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "evacnet/evacuation.h"
#include "evacnet/io.h"
#include "evacnet/oracles.h"
#include "evacnet/partition.h"
#include "evacnet/regret.h"

namespace evacnet {
namespace {

using Json = nlohmann::ordered_json;

struct Flags {
  std::string instance;
  std::vector<std::string> files;
  int k = 1;
  std::string mode = "discrete";
  std::string solver = "threshold";
  bool json = false;
  bool verify = false;
  uint64_t seed = 1;
  int jobs = 1;
  std::string scenario;
  std::string sink;
  std::string cuts;
  std::string sinks;
  std::string placement_file;
  int random = 0;
  int n = 10;
  int max_length = 4;
  int max_weight = 6;
  double capacity = 1.0;
  bool with_scenario = false;
};

std::string Num(double value) { return format_number(value); }

std::string ListText(std::span<const double> values) {
  std::string out = "(";
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += Num(values[i]);
  }
  return out + ")";
}

std::string PlacementText(const Placement& placement) {
  std::ostringstream out;
  out << "cuts [";
  for (size_t i = 0; i < placement.partition.cut_edges.size(); ++i) {
    out << (i ? ", " : "") << placement.partition.cut_edges[i];
  }
  out << "]  sinks [";
  for (size_t i = 0; i < placement.sinks.size(); ++i) {
    const SinkLocation& x = placement.sinks[i];
    out << (i ? ", " : "");
    if (x.is_vertex()) {
      out << x.vertex();
    } else {
      out << "e" << x.edge() << ":" << Num(x.offset());
    }
  }
  out << "]";
  return out.str();
}

Json VectorJson(std::span<const double> values) {
  Json out = Json::array();
  for (double v : values) out.push_back(v);
  return out;
}

// Offsets as they will be printed, so a reported placement can be fed back.
Placement RoundPlacement(const Tree& tree, const Placement& placement) {
  std::vector<SinkLocation> sinks;
  for (const SinkLocation& x : placement.sinks) {
    sinks.push_back(x.is_vertex() ? x
                                  : SinkLocation::OnEdge(tree, x.edge(),
                                                         round_offset(x.offset())));
  }
  return MakePlacement(tree, placement.partition.cut_edges, std::move(sinks));
}

Scenario ScenarioFor(const Flags& flags, const Instance& instance) {
  if (!flags.scenario.empty()) {
    return parse_scenario(flags.scenario, instance.tree.num_vertices());
  }
  if (instance.scenario) return *instance.scenario;
  throw InvalidInputError(
      "no scenario: pass --scenario or add \"scenario\" to the instance");
}

Placement PlacementFor(const Flags& flags, const Tree& tree) {
  if (!flags.placement_file.empty()) {
    const std::string text = read_text(flags.placement_file);
    nlohmann::json json;
    try {
      json = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
      throw ParseError(flags.placement_file + ": malformed JSON");
    }
    return placement_from_json(tree, json);
  }
  if (!flags.sink.empty()) {
    return MakePlacement(tree, {}, {parse_sink(tree, flags.sink)});
  }
  if (flags.sinks.empty()) {
    throw InvalidInputError("no placement: pass --sink, --sinks or --placement");
  }
  std::vector<SinkLocation> sinks;
  std::string_view rest = flags.sinks;
  while (true) {
    const size_t comma = rest.find(',');
    sinks.push_back(parse_sink(tree, rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return MakePlacement(tree, parse_int_list(flags.cuts), std::move(sinks));
}

SolverKind InnerSolver(const Flags& flags) {
  return flags.verify ? SolverKind::kExact : SolverKind::kThreshold;
}

Json ReportJson(const std::string& command, const Flags& flags,
                const RegretReport& report) {
  Json out;
  out["command"] = command;
  out["k"] = flags.k;
  out["mode"] = flags.mode;
  if (command == "solve") out["solver"] = flags.solver;
  out["inner_solver"] = std::string(ToString(InnerSolver(flags)));
  out["value"] = report.max_regret;
  out["placement"] = placement_to_json(report.placement);
  out["block_costs"] = VectorJson(report.block_regrets);
  out["worst_scenario"] = scenario_to_json(report.worst_scenario);
  out["worst_block"] = report.worst_block;
  out["theta_at_worst"] = report.theta_at_worst;
  out["theta_opt_at_worst"] = report.theta_opt_at_worst;
  return out;
}

void PrintReport(std::ostream& out, const RegretReport& report) {
  out << "max regret      " << Num(report.max_regret) << "\n";
  out << "placement       " << PlacementText(report.placement) << "\n";
  out << "block regrets   " << ListText(report.block_regrets) << "\n";
  out << "worst scenario  " << ListText(report.worst_scenario.weights())
      << "\n";
  out << "worst block     " << report.worst_block << "  (time "
      << Num(report.theta_at_worst) << ", optimum "
      << Num(report.theta_opt_at_worst) << ")\n";
}

void Emit(std::ostream& out, const Json& json) { out << json.dump(2) << "\n"; }

int RunEvac(const Flags& flags, std::ostream& out) {
  const Instance instance = load_instance(flags.instance);
  const Scenario s = ScenarioFor(flags, instance);
  const Placement placement = PlacementFor(flags, instance.tree);
  const std::vector<double> costs = block_costs(instance.tree, placement, s);
  const double value = *std::max_element(costs.begin(), costs.end());
  if (flags.json) {
    Json json;
    json["command"] = "evac";
    json["value"] = value;
    json["placement"] = placement_to_json(placement);
    json["block_costs"] = VectorJson(costs);
    json["scenario"] = scenario_to_json(s);
    Emit(out, json);
  } else {
    out << "evacuation time " << Num(value) << "\n";
    out << "placement       " << PlacementText(placement) << "\n";
    out << "block costs     " << ListText(costs) << "\n";
  }
  return kExitOk;
}

int RunKSink(const Flags& flags, std::ostream& out) {
  const Instance instance = load_instance(flags.instance);
  const Scenario s = ScenarioFor(flags, instance);
  const EvacuationOracle oracle(instance.tree, s);
  const PartitionSolution solution =
      solve_minmax_partition(oracle, flags.k, ParseSinkMode(flags.mode),
                             ParseSolverKind(flags.solver));
  const Placement placement = RoundPlacement(instance.tree, solution.placement);
  const std::vector<double> costs = block_costs(instance.tree, placement, s);
  const double value = *std::max_element(costs.begin(), costs.end());
  if (flags.json) {
    Json json;
    json["command"] = "ksink";
    json["k"] = flags.k;
    json["mode"] = flags.mode;
    json["solver"] = flags.solver;
    json["value"] = value;
    json["placement"] = placement_to_json(placement);
    json["block_costs"] = VectorJson(costs);
    json["scenario"] = scenario_to_json(s);
    Emit(out, json);
  } else {
    out << "optimal time    " << Num(value) << "\n";
    out << "placement       " << PlacementText(placement) << "\n";
    out << "block costs     " << ListText(costs) << "\n";
  }
  return kExitOk;
}

int RunMaxRegret(const Flags& flags, std::ostream& out) {
  const Instance instance = load_instance(flags.instance);
  const Placement placement = PlacementFor(flags, instance.tree);
  const ThetaOptCache opt(instance.tree, flags.k, ParseSinkMode(flags.mode),
                          InnerSolver(flags));
  const RegretReport report = max_regret(instance.profile, placement, opt);
  if (flags.json) {
    Emit(out, ReportJson("maxregret", flags, report));
  } else {
    PrintReport(out, report);
  }
  return kExitOk;
}

int RunSolve(const Flags& flags, std::ostream& out) {
  const Instance instance = load_instance(flags.instance);
  const SinkMode mode = ParseSinkMode(flags.mode);
  MinmaxRegretOptions options;
  options.solver = ParseSolverKind(flags.solver);
  options.inner_solver = InnerSolver(flags);
  const MinmaxRegretResult result =
      solve_minmax_regret(instance.tree, instance.profile, flags.k, mode,
                          options);
  // Score the placement exactly as printed.
  const ThetaOptCache opt(instance.tree, flags.k, mode, options.inner_solver);
  const RegretReport report = max_regret(
      instance.profile, RoundPlacement(instance.tree, result.report.placement),
      opt);
  if (flags.json) {
    Emit(out, ReportJson("solve", flags, report));
  } else {
    PrintReport(out, report);
  }
  return kExitOk;
}

struct CheckResult {
  std::string instance;
  std::string check;
  bool ok = true;
  double got = 0.0;
  double expected = 0.0;
};

bool Close(double a, double b) {
  return std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(b));
}

bool IsIntegral(const Instance& instance) {
  auto whole = [](double x) { return x == std::floor(x); };
  if (!whole(instance.tree.capacity())) return false;
  for (const Edge& e : instance.tree.edges()) {
    if (!whole(e.length)) return false;
  }
  for (VertexId v = 0; v < instance.profile.size(); ++v) {
    if (!whole(instance.profile.lo(v)) || !whole(instance.profile.hi(v))) {
      return false;
    }
  }
  return !instance.scenario ||
         std::all_of(instance.scenario->weights().begin(),
                     instance.scenario->weights().end(), whole);
}

std::vector<CheckResult> VerifyInstance(const std::string& name,
                                        const Instance& instance,
                                        const Flags& flags, bool fixed_k) {
  const Tree& tree = instance.tree;
  const int n = tree.num_vertices();
  std::vector<CheckResult> results;
  auto record = [&](std::string check, double got, double expected, bool ok) {
    results.push_back({name, std::move(check), ok, got, expected});
  };
  std::vector<Scenario> scenarios{instance.profile.all_lo(),
                                  instance.profile.all_hi()};
  if (instance.scenario) scenarios.push_back(*instance.scenario);

  if (IsIntegral(instance)) {
    std::vector<VertexId> all(n);
    for (VertexId v = 0; v < n; ++v) all[v] = v;
    const Block whole(all);
    for (size_t i = 0; i < scenarios.size(); ++i) {
      for (VertexId x = 0; x < n; ++x) {
        const double expected = simulate_evacuation(tree, whole, x, scenarios[i]);
        const double got =
            evac_time(tree, whole, SinkLocation::AtVertex(x), scenarios[i]);
        record("evac s" + std::to_string(i) + " sink " + std::to_string(x), got,
               expected, got == expected);
      }
    }
  }

  std::vector<int> ks;
  if (fixed_k) {
    if (flags.k <= n) ks.push_back(flags.k);
  } else {
    for (int k = 1; k <= std::min(3, n); ++k) ks.push_back(k);
  }
  for (int k : ks) {
    if (CountCombinations(n - 1, k - 1) > 5000) continue;
    for (SinkMode mode : {SinkMode::kDiscrete, SinkMode::kContinuous}) {
      const std::string tag =
          " k=" + std::to_string(k) + " " + std::string(ToString(mode));
      const Scenario& s = scenarios.back();
      const EvacuationOracle fast(tree, s);
      const DirectEvacuationOracle slow(tree, s);
      const double expected = brute_solve_partition(slow, k, mode).value;
      for (SolverKind solver : {SolverKind::kThreshold, SolverKind::kExact}) {
        const double got = solve_minmax_partition(fast, k, mode, solver).value;
        record("ksink " + std::string(ToString(solver)) + tag, got, expected,
               Close(got, expected));
      }
      if (n > 8 || k > 2) continue;
      MinmaxRegretOptions options;
      options.inner_solver = InnerSolver(flags);
      const MinmaxRegretResult solved =
          solve_minmax_regret(tree, instance.profile, k, mode, options);
      const RegretReport brute =
          brute_solve_regret(tree, instance.profile, k, mode);
      record("solve" + tag, solved.report.max_regret, brute.max_regret,
             Close(solved.report.max_regret, brute.max_regret));
      const double corners =
          corner_max_regret(tree, instance.profile, solved.report.placement, k,
                            mode)
              .value;
      record("maxregret" + tag, solved.report.max_regret, corners,
             Close(solved.report.max_regret, corners));
    }
  }
  return results;
}

int RunVerify(const Flags& flags, bool fixed_k, std::ostream& out) {
  std::vector<std::pair<std::string, Instance>> instances;
  for (const std::string& path : flags.files) {
    instances.emplace_back(path, load_instance(path));
  }
  std::mt19937_64 rng(flags.seed);
  for (int i = 0; i < flags.random; ++i) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    RandomInstance r = random_instance(rng, n);
    instances.emplace_back("random#" + std::to_string(i),
                           Instance{std::move(r.tree), std::move(r.profile), {}});
  }
  if (instances.empty()) {
    throw InvalidInputError("nothing to verify: pass files or --random N");
  }

  std::vector<std::vector<CheckResult>> results(instances.size());
  std::vector<std::string> errors(instances.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < instances.size(); i = next++) {
      try {
        results[i] = VerifyInstance(instances[i].first, instances[i].second,
                                    flags, fixed_k);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(flags.jobs, instances.size()));
  std::vector<std::thread> threads;
  for (int j = 1; j < jobs; ++j) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  int checks = 0;
  int failures = 0;
  Json json_results = Json::array();
  for (size_t i = 0; i < instances.size(); ++i) {
    if (!errors[i].empty()) {
      ++checks;
      ++failures;
      if (flags.json) {
        json_results.push_back({{"instance", instances[i].first},
                                {"check", "error"},
                                {"ok", false},
                                {"message", errors[i]}});
      } else {
        out << "FAIL " << instances[i].first << " error: " << errors[i] << "\n";
      }
      continue;
    }
    for (const CheckResult& r : results[i]) {
      ++checks;
      failures += r.ok ? 0 : 1;
      if (flags.json) {
        json_results.push_back({{"instance", r.instance},
                                {"check", r.check},
                                {"ok", r.ok},
                                {"got", r.got},
                                {"expected", r.expected}});
      } else if (!r.ok) {
        out << "FAIL " << r.instance << " " << r.check << ": got "
            << Num(r.got) << ", expected " << Num(r.expected) << "\n";
      }
    }
  }
  if (flags.json) {
    Json json;
    json["command"] = "verify";
    json["instances"] = instances.size();
    json["checks"] = checks;
    json["failures"] = failures;
    json["results"] = std::move(json_results);
    Emit(out, json);
  } else {
    out << instances.size() << " instances, " << checks << " checks, "
        << failures << " failures\n";
  }
  return failures == 0 ? kExitOk : kExitMismatch;
}

int RunGenerate(const Flags& flags, std::ostream& out) {
  std::mt19937_64 rng(flags.seed);
  RandomInstanceOptions options;
  options.max_length = flags.max_length;
  options.max_weight = flags.max_weight;
  options.capacity = flags.capacity;
  RandomInstance r = random_instance(rng, flags.n, options);
  Instance instance{std::move(r.tree), std::move(r.profile), {}};
  if (flags.with_scenario) {
    instance.scenario = random_integral_scenario(rng, flags.n, flags.max_weight);
  }
  out << instance_to_json(instance).dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  Flags flags;
  CLI::App app{"Evacuation sink location on dynamic tree networks", "evacnet"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  const std::vector<std::string> modes{"discrete", "continuous"};
  const std::vector<std::string> solvers{"exact", "threshold"};
  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("instance", flags.instance, "Instance file, or - for stdin")
        ->required();
    sub->add_flag("--json", flags.json, "Print a JSON report");
  };
  auto add_k = [&](CLI::App* sub) {
    sub->add_option("--k", flags.k, "Number of sinks")->check(CLI::PositiveNumber);
    sub->add_option("--mode", flags.mode, "Sink positions")
        ->check(CLI::IsMember(modes));
  };
  auto add_placement = [&](CLI::App* sub) {
    sub->add_option("--cuts", flags.cuts, "Cut edge ids, e.g. 0,3");
    sub->add_option("--sinks", flags.sinks,
                    "One sink per block: vertex id or eE:OFFSET");
    sub->add_option("--placement", flags.placement_file,
                    "Placement JSON, or a report holding one");
  };
  auto add_verify = [&](CLI::App* sub) {
    sub->add_flag("--verify", flags.verify,
                  "Exact enumeration for the inner optimal times");
  };

  CLI::App* evac = app.add_subcommand("evac", "Evacuation time of a placement");
  add_instance(evac);
  add_placement(evac);
  evac->add_option("--sink", flags.sink, "Single sink for the whole tree");
  evac->add_option("--scenario", flags.scenario, "Comma separated weights");

  CLI::App* ksink = app.add_subcommand("ksink", "Optimal k-sink placement");
  add_instance(ksink);
  add_k(ksink);
  ksink->add_option("--solver", flags.solver)->check(CLI::IsMember(solvers));
  ksink->add_option("--scenario", flags.scenario, "Comma separated weights");

  CLI::App* maxregret =
      app.add_subcommand("maxregret", "Max-regret of a placement");
  add_instance(maxregret);
  add_k(maxregret);
  add_placement(maxregret);
  maxregret->add_option("--sink", flags.sink, "Single sink for the whole tree");
  add_verify(maxregret);

  CLI::App* solve = app.add_subcommand("solve", "Minmax-regret placement");
  add_instance(solve);
  add_k(solve);
  solve->add_option("--solver", flags.solver)->check(CLI::IsMember(solvers));
  add_verify(solve);

  CLI::App* verify =
      app.add_subcommand("verify", "Compare solvers with brute force");
  verify->add_option("files", flags.files, "Instance files");
  verify->add_option("--random", flags.random, "Also check N random instances")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", flags.seed, "Seed for --random");
  CLI::Option* verify_k =
      verify->add_option("--k", flags.k, "Only this k (default 1 to 3)")
          ->check(CLI::PositiveNumber);
  verify->add_option("--jobs", flags.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--json", flags.json, "Print a JSON report");
  add_verify(verify);

  CLI::App* generate = app.add_subcommand("generate", "Random instance");
  generate->add_option("--n", flags.n, "Vertices")->check(CLI::PositiveNumber);
  generate->add_option("--seed", flags.seed, "Random seed");
  generate->add_option("--max-length", flags.max_length)
      ->check(CLI::PositiveNumber);
  generate->add_option("--max-weight", flags.max_weight)
      ->check(CLI::NonNegativeNumber);
  generate->add_option("--capacity", flags.capacity)
      ->check(CLI::PositiveNumber);
  generate->add_flag("--with-scenario", flags.with_scenario,
                     "Add an integral fixed scenario");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (evac->parsed()) return RunEvac(flags, out);
    if (ksink->parsed()) return RunKSink(flags, out);
    if (maxregret->parsed()) return RunMaxRegret(flags, out);
    if (solve->parsed()) return RunSolve(flags, out);
    if (verify->parsed()) return RunVerify(flags, verify_k->count() > 0, out);
    if (generate->parsed()) return RunGenerate(flags, out);
  } catch (const EvacError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitBadInput;
}

}  // namespace evacnet
