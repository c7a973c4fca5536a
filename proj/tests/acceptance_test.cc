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


// Acceptance suite. Prints one PASS/FAIL line per criterion, with indented
// detail lines, and exits nonzero if any criterion fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "evacnet/cli.h"
#include "evacnet/evacuation.h"
#include "evacnet/io.h"
#include "evacnet/oracles.h"
#include "evacnet/partition.h"
#include "evacnet/regret.h"
#include "json.hpp"
#include "test_util.h"

namespace evacnet {
namespace {

using testing::RandomInt;
using testing::RelClose;
using testing::WholeTree;

// Pinned tolerances and budgets.
constexpr double kAbsTol = 1e-9;
constexpr double kRelTol = 1e-6;
constexpr double kBudget1 = 30;
constexpr double kBudget2 = 300;
constexpr double kBudget3 = 300;
constexpr double kBudget4 = 600;
constexpr double kBudget7 = 600;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;
  void Note(const std::string& line) { details.push_back(line); }
  void Require(bool ok, const std::string& line) {
    pass = pass && ok;
    Note(line);
  }
};

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof buffer, format, args);
  va_end(args);
  return buffer;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Runs body(i) for i in [0, count) on all hardware threads.
void ParallelFor(int count, const std::function<void(int)>& body) {
  int jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, count);
  std::atomic<int> next{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < jobs; ++t) {
    threads.emplace_back([&] {
      for (int i = next++; i < count; i = next++) body(i);
    });
  }
  for (std::thread& t : threads) t.join();
}

// Instances are drawn up front so results do not depend on scheduling.
std::vector<RandomInstance> DrawInstances(uint64_t seed, int count, int n_min,
                                          int n_max, bool vary_capacity = false) {
  std::mt19937_64 rng(seed);
  std::vector<RandomInstance> out;
  for (int i = 0; i < count; ++i) {
    int n = RandomInt(rng, n_min, n_max);
    RandomInstanceOptions options;
    if (vary_capacity) options.capacity = RandomInt(rng, 1, 3);
    out.push_back(random_instance(rng, n, options));
  }
  return out;
}

RandomInstance WithPositiveLowerBounds(RandomInstance r) {
  int n = r.profile.size();
  std::vector<double> lo(n), hi(n);
  for (VertexId v = 0; v < n; ++v) {
    lo[v] = std::max(1.0, r.profile.lo(v));
    hi[v] = std::max(lo[v], r.profile.hi(v));
  }
  r.profile = IntervalProfile(lo, hi);
  return r;
}

Scenario IntegralScenarioInBox(std::mt19937_64& rng,
                               const IntervalProfile& profile) {
  std::vector<double> w(profile.size());
  for (VertexId v = 0; v < profile.size(); ++v) {
    w[v] = RandomInt(rng, static_cast<int>(profile.lo(v)),
                     static_cast<int>(profile.hi(v)));
  }
  return Scenario(w);
}

// 1. Closed form against token simulation.
Outcome FormulaVsSimulation() {
  Timer timer;
  std::mt19937_64 rng(1001);
  int blocks = 0, mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    int n = RandomInt(rng, 1, 10);
    RandomInstanceOptions options;
    options.capacity = RandomInt(rng, 1, 3);
    RandomInstance r = random_instance(rng, n, options);
    Scenario s = random_integral_scenario(rng, n, options.max_weight);
    Placement p = random_placement(rng, r.tree, RandomInt(rng, 1, n),
                                   SinkMode::kDiscrete);
    for (int b = 0; b < p.partition.size(); ++b) {
      const Block& block = p.partition.blocks[b];
      VertexId x = p.sinks[b].vertex();
      ++blocks;
      if (evac_time(r.tree, block, p.sinks[b], s) !=
          simulate_evacuation(r.tree, block, x, s)) {
        ++mismatches;
      }
    }
  }
  Outcome o;
  o.Require(mismatches == 0,
            Fmt("500 instances, %d blocks, %d inexact", blocks, mismatches));
  double t = timer.seconds();
  o.Require(t < kBudget1, Fmt("runtime %.1f s (budget %.0f s)", t, kBudget1));
  return o;
}

struct RestrictionCount {
  int placements = 0;
  int mismatches = 0;
  int bad_instances = 0;
};

RestrictionCount CompareWithCorners(const std::vector<RandomInstance>& all) {
  std::vector<RestrictionCount> per(all.size());
  ParallelFor(all.size(), [&](int i) {
    const RandomInstance& r = all[i];
    int n = r.tree.num_vertices();
    for (int k = 1; k <= std::min(2, n); ++k) {
      ThetaOptCache opt(r.tree, k, SinkMode::kDiscrete, SolverKind::kExact);
      testing::ForEachVertexPlacement(r.tree, k, [&](const Placement& p) {
        double family = max_regret(r.profile, p, opt).max_regret;
        double corners =
            corner_max_regret(r.tree, r.profile, p, k, SinkMode::kDiscrete)
                .value;
        ++per[i].placements;
        if (std::abs(family - corners) > kAbsTol) ++per[i].mismatches;
      });
    }
  });
  RestrictionCount total;
  for (const RestrictionCount& c : per) {
    total.placements += c.placements;
    total.mismatches += c.mismatches;
    total.bad_instances += c.mismatches > 0;
  }
  return total;
}

// 2. Family-restricted max-regret against all corners, every placement.
Outcome WorstCaseRestriction() {
  Timer timer;
  std::vector<RandomInstance> instances = DrawInstances(2026, 200, 1, 8);
  RestrictionCount c = CompareWithCorners(instances);
  Outcome o;
  o.Require(c.mismatches == 0,
            Fmt("200 instances, %d placements (k = 1, 2): %d placements on %d "
                "instances differ by more than %g",
                c.placements, c.mismatches, c.bad_instances, kAbsTol));
  double t = timer.seconds();
  o.Require(t < kBudget2, Fmt("runtime %.1f s (budget %.0f s)", t, kBudget2));

  std::vector<RandomInstance> positive;
  for (const RandomInstance& r : instances) {
    positive.push_back(WithPositiveLowerBounds(r));
  }
  RestrictionCount p = CompareWithCorners(positive);
  o.Note(Fmt("same instances with lower weights raised to >= 1: %d of %d "
             "placements differ",
             p.mismatches, p.placements));
  return o;
}

// 3. Threshold solver against the cut-set enumerator.
Outcome SolverExactness() {
  Timer timer;
  std::vector<RandomInstance> instances = DrawInstances(3003, 200, 1, 10, true);
  std::vector<Scenario> scenarios;
  std::vector<int> ks;
  std::mt19937_64 rng(3004);
  for (const RandomInstance& r : instances) {
    scenarios.push_back(random_scenario(rng, r.profile));
    ks.push_back(RandomInt(rng, 1, std::min(3, r.tree.num_vertices())));
  }
  std::vector<int> bad(instances.size(), 0);
  std::mutex mutex;
  std::string first;
  ParallelFor(instances.size(), [&](int i) {
    EvacuationOracle oracle(instances[i].tree, scenarios[i]);
    for (SinkMode mode : {SinkMode::kDiscrete, SinkMode::kContinuous}) {
      double brute = brute_solve_partition(oracle, ks[i], mode).value;
      PartitionSolution fast = solve_minmax_partition(oracle, ks[i], mode,
                                                      SolverKind::kThreshold);
      double rescored = placement_cost(instances[i].tree, fast.placement,
                                       scenarios[i]);
      if (!RelClose(fast.value, brute, kRelTol) ||
          !RelClose(rescored, fast.value, kRelTol)) {
        ++bad[i];
        std::lock_guard<std::mutex> lock(mutex);
        if (first.empty()) {
          first = Fmt("instance %d %s: %.12g vs %.12g", i,
                      std::string(ToString(mode)).c_str(), fast.value, brute);
        }
      }
    }
  });
  int mismatches = std::accumulate(bad.begin(), bad.end(), 0);
  Outcome o;
  o.Require(mismatches == 0,
            Fmt("200 instances x 2 modes, k <= 3: %d disagree beyond %g "
                "relative",
                mismatches, kRelTol));
  if (!first.empty()) o.Note("first: " + first);
  double t = timer.seconds();
  o.Require(t < kBudget3, Fmt("runtime %.1f s (budget %.0f s)", t, kBudget3));
  return o;
}

struct EndToEndCount {
  int runs = 0;
  int value_mismatches = 0;
  int recompute_mismatches = 0;
  std::string first;
};

EndToEndCount CompareWithBruteRegret(const std::vector<RandomInstance>& all,
                                     const std::vector<int>& ks) {
  std::vector<EndToEndCount> per(all.size());
  ParallelFor(all.size(), [&](int i) {
    const RandomInstance& r = all[i];
    for (SinkMode mode : {SinkMode::kDiscrete, SinkMode::kContinuous}) {
      MinmaxRegretResult fast = solve_minmax_regret(r.tree, r.profile, ks[i],
                                                    mode);
      RegretReport brute = brute_solve_regret(r.tree, r.profile, ks[i], mode);
      double recomputed = corner_max_regret(r.tree, r.profile,
                                            fast.report.placement, ks[i], mode)
                              .value;
      ++per[i].runs;
      bool value_ok = RelClose(fast.report.max_regret, brute.max_regret,
                               kRelTol);
      bool recompute_ok = RelClose(recomputed, fast.report.max_regret, kRelTol);
      per[i].value_mismatches += !value_ok;
      per[i].recompute_mismatches += !recompute_ok;
      if ((!value_ok || !recompute_ok) && per[i].first.empty()) {
        per[i].first = Fmt("instance %d k=%d %s: solver %.12g, brute %.12g, "
                           "corners of returned placement %.12g",
                           i, ks[i], std::string(ToString(mode)).c_str(),
                           fast.report.max_regret, brute.max_regret,
                           recomputed);
      }
    }
  });
  EndToEndCount total;
  for (const EndToEndCount& c : per) {
    total.runs += c.runs;
    total.value_mismatches += c.value_mismatches;
    total.recompute_mismatches += c.recompute_mismatches;
    if (total.first.empty()) total.first = c.first;
  }
  return total;
}

// 4. Minmax-regret solver against exhaustive corner enumeration.
Outcome EndToEnd() {
  Timer timer;
  std::vector<RandomInstance> instances = DrawInstances(4004, 100, 1, 7);
  std::vector<int> ks;
  std::mt19937_64 rng(4005);
  for (const RandomInstance& r : instances) {
    ks.push_back(RandomInt(rng, 1, std::min(2, r.tree.num_vertices())));
  }
  EndToEndCount c = CompareWithBruteRegret(instances, ks);
  Outcome o;
  o.Require(c.value_mismatches == 0,
            Fmt("100 instances x 2 modes: %d of %d optimal values differ from "
                "brute force beyond %g relative",
                c.value_mismatches, c.runs, kRelTol));
  o.Require(c.recompute_mismatches == 0,
            Fmt("%d of %d returned placements have a corner max-regret other "
                "than the reported value",
                c.recompute_mismatches, c.runs));
  if (!c.first.empty()) o.Note("first: " + c.first);
  double t = timer.seconds();
  o.Require(t < kBudget4, Fmt("runtime %.1f s (budget %.0f s)", t, kBudget4));

  std::vector<RandomInstance> positive;
  for (const RandomInstance& r : instances) {
    positive.push_back(WithPositiveLowerBounds(r));
  }
  EndToEndCount p = CompareWithBruteRegret(positive, ks);
  o.Note(Fmt("same instances with lower weights raised to >= 1: %d value and "
             "%d recompute mismatches of %d",
             p.value_mismatches, p.recompute_mismatches, p.runs));
  return o;
}

// Vertices on the `from` side of edge (from, to).
std::vector<VertexId> SideOf(const Tree& tree, VertexId from, VertexId to) {
  std::vector<VertexId> side;
  for (VertexId v = 0; v < tree.num_vertices(); ++v) {
    if (tree.distance(v, from) < tree.distance(v, to)) side.push_back(v);
  }
  return side;
}

struct ContractCount {
  int checks = 0;
  int self_service = 0;
  int path = 0;
  int branch_max = 0;
  int partition_max = 0;
  std::string Summary() const {
    return Fmt("%d checks: self-service %d, path monotone %d, branch max %d, "
               "block max %d violations",
               checks, self_service, path, branch_max, partition_max);
  }
  bool ok() const {
    return self_service + path + branch_max + partition_max == 0;
  }
};

// Self-service, path monotonicity, branch and partition composition, with
// the composed side computed independently. `block_cost` is the reference
// cost of a block; `placement_value` the reference cost of a placement.
void CheckContract(
    const Tree& tree, const CostOracle& oracle, std::mt19937_64& rng,
    const std::function<double(const Block&, const SinkLocation&)>& block_cost,
    const std::function<double(const Placement&)>& placement_value,
    ContractCount& count) {
  int n = tree.num_vertices();
  ++count.checks;
  VertexId x = RandomInt(rng, 0, n - 1);
  SinkLocation sx = SinkLocation::AtVertex(x);
  if (oracle.cost(Block({x}), sx) != 0) ++count.self_service;

  if (n > 1) {
    const Neighbor& nb = tree.neighbors(x)[RandomInt(
        rng, 0, static_cast<int>(tree.neighbors(x).size()) - 1)];
    std::vector<VertexId> side = SideOf(tree, x, nb.vertex);
    std::vector<VertexId> grown = side;
    grown.push_back(nb.vertex);
    if (oracle.cost(Block(grown), SinkLocation::AtVertex(nb.vertex)) + kAbsTol <
        oracle.cost(Block(side), sx)) {
      ++count.path;
    }
  }

  Block all = WholeTree(tree);
  Placement one = random_placement(rng, tree, 1, SinkMode::kContinuous);
  const SinkLocation& y = one.sinks[0];
  double composed = 0;
  for (const Block& b : branches(tree, all, y)) {
    composed = std::max(composed, oracle.branch_cost(b.members(), y));
  }
  if (std::abs(block_cost(all, y) - composed) > kAbsTol) ++count.branch_max;

  Placement p = random_placement(rng, tree, RandomInt(rng, 1, n),
                                 SinkMode::kContinuous);
  double worst = 0;
  for (int i = 0; i < p.partition.size(); ++i) {
    worst = std::max(worst, oracle.cost(p.partition.blocks[i], p.sinks[i]));
  }
  if (std::abs(placement_value(p) - worst) > kAbsTol) ++count.partition_max;
}

struct EdgeScanCount {
  int edges = 0;
  int decreases = 0;
  int interior_jumps = 0;
  int bad_left_end = 0;
};

// Scans the `side` component as the sink moves from `from` across the edge
// to `to` at 1000 points. With unit-slope costs, a step may grow by at most
// the step length anywhere but at the start.
void ScanEdge(const Tree& tree, const CostOracle& oracle, VertexId from,
              VertexId to, EdgeScanCount& count) {
  constexpr int kSteps = 1000;
  EdgeId e = *tree.edge_between(from, to);
  const Edge& edge = tree.edge(e);
  std::vector<VertexId> side = SideOf(tree, from, to);
  std::vector<VertexId> grown = side;
  grown.push_back(to);
  double step = edge.length / kSteps;
  double at_from = oracle.cost(Block(side), SinkLocation::AtVertex(from));
  double previous = at_from;
  bool decreased = false, jumped = false;
  for (int i = 1; i <= kSteps; ++i) {
    double value;
    if (i == kSteps) {
      value = oracle.cost(Block(grown), SinkLocation::AtVertex(to));
    } else {
      double t = edge.length * i / kSteps;
      double offset = edge.u == from ? t : edge.length - t;
      value = oracle.branch_cost(side, SinkLocation::OnEdge(tree, e, offset));
    }
    if (value + kAbsTol < previous) decreased = true;
    if (i > 1 && value - previous > step + kAbsTol) jumped = true;
    if (i == 1 && at_from > value + kAbsTol) ++count.bad_left_end;
    previous = value;
  }
  ++count.edges;
  count.decreases += decreased;
  count.interior_jumps += jumped;
}

// 5. Contract properties, scenario dominance and edge scans.
Outcome MonotoneContract() {
  Timer timer;
  Outcome o;
  std::mt19937_64 rng(5005);

  ContractCount evac, clamped;
  for (int i = 0; i < 100; ++i) {
    int n = RandomInt(rng, 1, 8);
    RandomInstance r = random_instance(rng, n);
    Scenario s = random_scenario(rng, r.profile);
    EvacuationOracle oracle(r.tree, s);
    DirectEvacuationOracle direct(r.tree, s);
    CheckContract(
        r.tree, oracle, rng,
        [&](const Block& b, const SinkLocation& x) {
          return direct.cost(b, x);
        },
        [&](const Placement& p) { return placement_cost(r.tree, p, s); },
        evac);

    int k = RandomInt(rng, 1, std::min(2, n));
    SinkMode mode = i % 2 ? SinkMode::kContinuous : SinkMode::kDiscrete;
    auto opt = std::make_shared<ThetaOptCache>(r.tree, k, mode);
    LocalRegretOracle regret_oracle(r.tree, r.profile, opt);
    CheckContract(
        r.tree, regret_oracle, rng,
        [&](const Block& b, const SinkLocation& x) {
          return clamped_local_regret(r.profile, b, x, *opt);
        },
        [&](const Placement& p) {
          return max_regret(r.profile, p, *opt).max_regret;
        },
        clamped);
  }
  o.Require(evac.ok(), "evacuation oracle: " + evac.Summary());
  o.Require(clamped.ok(), "clamped regret oracle: " + clamped.Summary());

  int dom2_time = 0, dom2_opt = 0, dom3 = 0, dom3_from_zero = 0,
      dom3_zero_tries = 0, dom3_positive = 0;
  for (int i = 0; i < 200; ++i) {
    int n = RandomInt(rng, 1, 8);
    RandomInstanceOptions options;
    options.capacity = RandomInt(rng, 1, 3);
    RandomInstance r = random_instance(rng, n, options);
    int k = RandomInt(rng, 1, std::min(3, n));
    SinkMode mode = i % 2 ? SinkMode::kContinuous : SinkMode::kDiscrete;
    Scenario s = IntegralScenarioInBox(rng, r.profile);

    std::vector<double> lower(n);
    for (VertexId v = 0; v < n; ++v) {
      lower[v] = RandomInt(rng, static_cast<int>(r.profile.lo(v)),
                           static_cast<int>(s[v]));
    }
    Placement p = random_placement(rng, r.tree, k, mode);
    if (placement_cost(r.tree, p, Scenario(lower)) >
        placement_cost(r.tree, p, s) + kAbsTol) {
      ++dom2_time;
    }
    double opt_s = theta_opt(r.tree, s, k, mode, SolverKind::kExact);
    if (theta_opt(r.tree, Scenario(lower), k, mode, SolverKind::kExact) >
        opt_s + kAbsTol) {
      ++dom2_opt;
    }

    VertexId v = RandomInt(rng, 0, n - 1);
    double delta = RandomInt(rng, 1, 6);
    std::vector<double> raised(s.weights().begin(), s.weights().end());
    raised[v] += delta;
    double opt_raised = theta_opt(r.tree, Scenario(raised), k, mode,
                                  SolverKind::kExact);
    bool violated = opt_raised > opt_s + delta / r.tree.capacity() + kAbsTol;
    dom3 += violated;
    if (s[v] == 0) {
      ++dom3_zero_tries;
      dom3_from_zero += violated;
    } else {
      dom3_positive += violated;
    }
  }
  o.Require(dom2_time == 0 && dom2_opt == 0,
            Fmt("scenario dominance, 200 pairs: %d evacuation-time and %d "
                "optimal-time violations",
                dom2_time, dom2_opt));
  o.Require(dom3 == 0,
            Fmt("single-weight raise by delta, 200 trials: %d exceed delta/c "
                "(%d of %d raises from weight 0, %d of %d from positive "
                "weight)",
                dom3, dom3_from_zero, dom3_zero_tries, dom3_positive,
                200 - dom3_zero_tries));

  EdgeScanCount scan_evac, scan_regret;
  for (int i = 0; i < 100; ++i) {
    int n = RandomInt(rng, 2, 8);
    RandomInstance r = random_instance(rng, n);
    EdgeId e = RandomInt(rng, 0, n - 2);
    VertexId from = r.tree.edge(e).u, to = r.tree.edge(e).v;
    if (RandomInt(rng, 0, 1)) std::swap(from, to);
    EvacuationOracle oracle(r.tree, random_scenario(rng, r.profile));
    ScanEdge(r.tree, oracle, from, to, scan_evac);
    int k = RandomInt(rng, 1, std::min(2, n));
    auto opt = std::make_shared<ThetaOptCache>(r.tree, k, SinkMode::kContinuous);
    LocalRegretOracle regret_oracle(r.tree, r.profile, opt);
    ScanEdge(r.tree, regret_oracle, from, to, scan_regret);
  }
  for (auto [name, c] : {std::pair{"evacuation", &scan_evac},
                         std::pair{"clamped regret", &scan_regret}}) {
    o.Require(c->decreases + c->interior_jumps + c->bad_left_end == 0,
              Fmt("%s, %d oriented edges x 1000 points: %d decrease, %d jump "
                  "inside, %d start above the right limit",
                  name, c->edges, c->decreases, c->interior_jumps,
                  c->bad_left_end));
  }
  o.Note(Fmt("runtime %.1f s", timer.seconds()));
  return o;
}

// 6. Golden instances through the library and the command line.
Outcome Goldens() {
  Outcome o;
  const std::string dir = std::string(EVACNET_DATA_DIR) + "/golden/";
  Instance regret_case = load_instance(dir + "three_path_regret.json");
  for (SinkMode mode : {SinkMode::kDiscrete, SinkMode::kContinuous}) {
    MinmaxRegretResult r =
        solve_minmax_regret(regret_case.tree, regret_case.profile, 1, mode);
    o.Require(r.report.max_regret == 3 &&
                  r.report.placement.sinks[0] == SinkLocation::AtVertex(1),
              Fmt("three_path_regret %s: R = %.12g at %s (want 3 at v1)",
                  std::string(ToString(mode)).c_str(), r.report.max_regret,
                  r.report.placement.sinks[0].ToString().c_str()));
  }

  Instance balance = load_instance(dir + "two_vertex_balance.json");
  EvacuationOracle oracle(balance.tree, *balance.scenario);
  PartitionSolution b = solve_minmax_partition(oracle, 1, SinkMode::kContinuous,
                                               SolverKind::kThreshold);
  const SinkLocation& x = b.placement.sinks[0];
  o.Require(b.value == 4.5 && !x.is_vertex() && x.offset() == 2.5,
            Fmt("two_vertex_balance: a = %.12g at %s (want 4.5 at e0@2.5)",
                b.value, x.ToString().c_str()));

  Instance abx = load_instance(dir + "path_abx.json");
  double theta = evac_time(abx.tree, WholeTree(abx.tree),
                           SinkLocation::AtVertex(2), *abx.scenario);
  double simulated = simulate_evacuation(abx.tree, WholeTree(abx.tree), 2,
                                         *abx.scenario);
  o.Require(theta == 6 && simulated == 6,
            Fmt("path_abx: evacuation time %.12g, simulated %.12g (want 6)",
                theta, simulated));

  std::ostringstream out, err;
  int code = run_command({"solve", dir + "three_path_regret.json", "--k", "1",
                          "--json"},
                         out, err);
  nlohmann::json report = nlohmann::json::parse(out.str());
  o.Require(code == kExitOk && report["value"] == 3.0 &&
                report["placement"]["sinks"][0]["vertex"] == 1,
            Fmt("cli solve on three_path_regret: exit %d, value %s", code,
                report["value"].dump().c_str()));
  return o;
}

// 7. Threshold solve at n = 200 against random placements.
Outcome ScaleSmoke() {
  Outcome o;
  std::mt19937_64 rng(7007);
  RandomInstance r = random_instance(rng, 200);
  std::filesystem::path path =
      std::filesystem::temp_directory_path() / "evacnet_acceptance_n200.json";
  std::ofstream(path) << instance_to_json({r.tree, r.profile, std::nullopt})
                             .dump(2);
  Timer timer;
  std::ostringstream out, err;
  int code = run_command({"solve", path.string(), "--k", "5", "--solver",
                          "threshold", "--json"},
                         out, err);
  double t = timer.seconds();
  std::filesystem::remove(path);
  if (code != kExitOk) {
    o.Require(false, "solve failed: " + err.str());
    return o;
  }
  double value = nlohmann::json::parse(out.str())["value"];
  o.Require(t < kBudget7, Fmt("solve --k 5 --solver threshold, n = 200: "
                              "value %.12g in %.1f s (budget %.0f s)",
                              value, t, kBudget7));

  ThetaOptCache opt(r.tree, 5, SinkMode::kDiscrete);
  double lowest = 1e300;
  int below = 0;
  for (int i = 0; i < 50; ++i) {
    Placement p = random_placement(rng, r.tree, 5, SinkMode::kDiscrete);
    double bound = max_regret(r.profile, p, opt).max_regret;
    lowest = std::min(lowest, bound);
    below += bound + kAbsTol < value;
  }
  o.Require(below == 0, Fmt("50 random placements: smallest max-regret %.12g, "
                            "%d below the solver value",
                            lowest, below));
  return o;
}

}  // namespace
}  // namespace evacnet

int main() {
  using evacnet::Outcome;
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"1 closed form equals token simulation", evacnet::FormulaVsSimulation},
      {"2 extreme family attains the corner max-regret",
       evacnet::WorstCaseRestriction},
      {"3 threshold solver equals enumeration", evacnet::SolverExactness},
      {"4 minmax-regret solver equals brute force", evacnet::EndToEnd},
      {"5 monotone cost contract", evacnet::MonotoneContract},
      {"6 golden instances", evacnet::Goldens},
      {"7 scale smoke test", evacnet::ScaleSmoke},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.Require(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << "\n";
    for (const std::string& line : o.details) std::cout << "     " << line << "\n";
    std::cout.flush();
  }
  std::cout << (sizeof criteria / sizeof criteria[0]) - failed << " of "
            << sizeof criteria / sizeof criteria[0] << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
