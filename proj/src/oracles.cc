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

#include "evacnet/oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>
#include <utility>

namespace evacnet {
namespace {

constexpr int kGoldenSteps = 100;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool IsInteger(double value) {
  return std::isfinite(value) && value == std::floor(value);
}

// Minimum of a unimodal f over the open interval (a, b).
template <typename F>
std::pair<double, double> GoldenMinimum(F&& f, double a, double b) {
  const double ratio = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int step = 0; step < kGoldenSteps; ++step) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

std::vector<EdgeId> EdgesInside(const Tree& tree, const Block& block) {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < tree.num_edges(); ++e) {
    if (block.contains(tree.edge(e).u) && block.contains(tree.edge(e).v)) {
      out.push_back(e);
    }
  }
  return out;
}

// Every way to pick one element from each list.
template <typename T, typename Visit>
void ForEachProduct(const std::vector<std::vector<T>>& lists, Visit&& visit) {
  std::vector<size_t> index(lists.size(), 0);
  for (const auto& list : lists) {
    if (list.empty()) return;
  }
  std::vector<T> pick;
  while (true) {
    pick.clear();
    for (size_t i = 0; i < lists.size(); ++i) pick.push_back(lists[i][index[i]]);
    visit(pick);
    size_t i = 0;
    for (; i < lists.size(); ++i) {
      if (++index[i] < lists[i].size()) break;
      index[i] = 0;
    }
    if (i == lists.size()) return;
  }
}

class CornerTable {
 public:
  CornerTable(const Tree& tree, const IntervalProfile& profile, int k,
              SinkMode mode, int cap)
      : tree_(tree), k_(k), mode_(mode) {
    const int n = tree.num_vertices();
    if (n > cap) {
      throw TooLargeForBruteForceError(
          "corner enumeration needs n <= " + std::to_string(cap) + ", got " +
          std::to_string(n));
    }
    std::set<Scenario> seen;
    for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
      std::vector<double> w(n);
      for (int v = 0; v < n; ++v) {
        w[v] = (mask >> v & 1) ? profile.hi(v) : profile.lo(v);
      }
      Scenario s(std::move(w));
      if (seen.insert(s).second) corners_.push_back(std::move(s));
    }
    std::sort(corners_.begin(), corners_.end());
  }

  const std::vector<Scenario>& corners() const { return corners_; }

  double Optimum(size_t corner) {
    auto it = optimum_.find(corner);
    if (it != optimum_.end()) return it->second;
    const DirectEvacuationOracle oracle(tree_, corners_[corner]);
    const double value = brute_solve_partition(oracle, k_, mode_).value;
    optimum_.emplace(corner, value);
    return value;
  }

 private:
  const Tree& tree_;
  int k_;
  SinkMode mode_;
  std::vector<Scenario> corners_;
  std::map<size_t, double> optimum_;
};

double PlacementTime(const Tree& tree, const Placement& placement,
                     const Scenario& s) {
  const DirectEvacuationOracle oracle(tree, s);
  double best = 0.0;
  for (size_t i = 0; i < placement.sinks.size(); ++i) {
    best = std::max(best,
                    oracle.cost(placement.partition.blocks[i], placement.sinks[i]));
  }
  return best;
}

CornerRegret CornerMax(const Tree& tree, const Placement& placement,
                       CornerTable& table) {
  std::vector<double> values;
  double best = -kInf;
  for (size_t i = 0; i < table.corners().size(); ++i) {
    values.push_back(PlacementTime(tree, placement, table.corners()[i]) -
                     table.Optimum(i));
    best = std::max(best, values.back());
  }
  // Corners are sorted, so the first near-maximum is the lexicographic one.
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= best - kEpsilon) return {values[i], table.corners()[i]};
  }
  return {};
}

}  // namespace

double simulate_evacuation(const Tree& tree, const Block& block, VertexId x,
                           const Scenario& s) {
  CheckSinkInBlock(tree, block, SinkLocation::AtVertex(x));
  if (!IsInteger(tree.capacity())) {
    throw NonIntegralInstanceError("capacity must be an integer");
  }
  const long long rate = static_cast<long long>(tree.capacity());
  const int n = tree.num_vertices();

  // Route toward x inside the block.
  std::vector<VertexId> next(n, -1);
  std::vector<long long> delay(n, 0);
  std::vector<long long> hops_length(n, 0);
  std::vector<VertexId> order{x};
  std::vector<char> seen(n, 0);
  seen[x] = 1;
  for (size_t i = 0; i < order.size(); ++i) {
    for (const Neighbor& nb : tree.neighbors(order[i])) {
      if (seen[nb.vertex] || !block.contains(nb.vertex)) continue;
      if (!IsInteger(nb.length)) {
        throw NonIntegralInstanceError("edge lengths must be integers");
      }
      seen[nb.vertex] = 1;
      next[nb.vertex] = order[i];
      delay[nb.vertex] = static_cast<long long>(nb.length) * rate;
      hops_length[nb.vertex] =
          hops_length[order[i]] + static_cast<long long>(nb.length);
      order.push_back(nb.vertex);
    }
  }

  // Tokens waiting at each vertex: (ready tick, origin distance, origin).
  using Token = std::tuple<long long, long long, VertexId>;
  std::vector<std::vector<Token>> waiting(n);
  long long remaining = 0;
  for (VertexId v : block.members()) {
    if (v == x) continue;
    if (!IsInteger(s[v])) {
      throw NonIntegralInstanceError("weights must be integers");
    }
    const long long count = static_cast<long long>(s[v]);
    for (long long j = 0; j < count; ++j) {
      waiting[v].emplace_back(0, hops_length[v], v);
    }
    remaining += count;
  }
  if (remaining == 0) return 0.0;

  long long last_arrival = 0;
  for (long long tick = 0; remaining > 0; ++tick) {
    std::vector<std::pair<VertexId, Token>> moves;
    for (VertexId v : block.members()) {
      if (v == x) continue;
      auto& queue = waiting[v];
      auto best = queue.end();
      for (auto it = queue.begin(); it != queue.end(); ++it) {
        if (std::get<0>(*it) > tick) continue;
        if (best == queue.end() ||
            std::tie(std::get<1>(*it), std::get<2>(*it)) <
                std::tie(std::get<1>(*best), std::get<2>(*best))) {
          best = it;
        }
      }
      if (best == queue.end()) continue;
      Token token = *best;
      queue.erase(best);
      std::get<0>(token) = tick + delay[v];
      moves.emplace_back(next[v], token);
    }
    for (auto& [to, token] : moves) {
      if (to == x) {
        last_arrival = std::max(last_arrival, std::get<0>(token));
        --remaining;
      } else {
        waiting[to].push_back(token);
      }
    }
  }
  // A token occupies one tick of an edge; the flow it stands for has fully
  // arrived one tick after its head does.
  return static_cast<double>(last_arrival + 1) / tree.capacity();
}

DirectEvacuationOracle::DirectEvacuationOracle(const Tree& tree,
                                               Scenario scenario)
    : CostOracle(tree), scenario_(std::move(scenario)) {
  if (scenario_.size() != tree.num_vertices()) {
    throw InvalidInputError("scenario size does not match the tree");
  }
}

double DirectEvacuationOracle::branch_cost(std::span<const VertexId> branch,
                                           const SinkLocation& x) const {
  double best = 0.0;
  for (VertexId pivot : branch) {
    const double d = tree().distance(x, pivot);
    double frontier = 0.0;
    for (VertexId v : branch) {
      if (tree().distance(x, v) >= d) frontier += scenario_[v];
    }
    if (frontier > 0) best = std::max(best, d + frontier / tree().capacity());
  }
  return best;
}

double DirectEvacuationOracle::cost(const Block& block,
                                    const SinkLocation& x) const {
  CheckSinkInBlock(tree(), block, x);
  const int n = tree().num_vertices();
  // Label each vertex with the vertex through which its flow enters x.
  std::vector<VertexId> label(n, -1);
  std::vector<VertexId> frontier;
  if (x.is_vertex()) {
    label[x.vertex()] = x.vertex();
    for (const Neighbor& nb : tree().neighbors(x.vertex())) {
      if (block.contains(nb.vertex)) {
        label[nb.vertex] = nb.vertex;
        frontier.push_back(nb.vertex);
      }
    }
  } else {
    const Edge& e = tree().edge(x.edge());
    label[e.u] = e.u;
    label[e.v] = e.v;
    frontier = {e.u, e.v};
  }
  for (size_t i = 0; i < frontier.size(); ++i) {
    for (const Neighbor& nb : tree().neighbors(frontier[i])) {
      if (label[nb.vertex] != -1 || !block.contains(nb.vertex)) continue;
      label[nb.vertex] = label[frontier[i]];
      frontier.push_back(nb.vertex);
    }
  }
  std::map<VertexId, std::vector<VertexId>> groups;
  for (VertexId v : block.members()) {
    if (x.is_vertex() && v == x.vertex()) continue;
    groups[label[v]].push_back(v);
  }
  double best = 0.0;
  for (const auto& [unused, members] : groups) {
    best = std::max(best, branch_cost(members, x));
  }
  return best;
}

double grid_edge_minimum(const CostOracle& oracle, const Block& block,
                         EdgeId edge, int samples) {
  const Tree& tree = oracle.tree();
  const double length = tree.edge(edge).length;
  double best = kInf;
  for (int i = 0; i < samples; ++i) {
    const double t = length * (i + 0.5) / samples;
    best = std::min(best,
                    oracle.cost(block, SinkLocation::OnEdge(tree, edge, t)));
  }
  return best;
}

PartitionSolution brute_solve_partition(const CostOracle& oracle, int k,
                                        SinkMode mode) {
  const Tree& tree = oracle.tree();
  if (k < 1 || k > tree.num_vertices()) {
    throw KOutOfRangeError("k must be in [1, n]");
  }
  std::map<Block, std::pair<SinkLocation, double>> memo;
  auto best_sink = [&](const Block& block) {
    auto it = memo.find(block);
    if (it != memo.end()) return it->second;
    std::pair<SinkLocation, double> best{SinkLocation::AtVertex(0), kInf};
    for (VertexId v : block.members()) {
      const SinkLocation x = SinkLocation::AtVertex(v);
      const double value = oracle.cost(block, x);
      if (value < best.second) best = {x, value};
    }
    if (mode == SinkMode::kContinuous) {
      for (EdgeId e : EdgesInside(tree, block)) {
        auto [t, value] = GoldenMinimum(
            [&](double t) {
              return oracle.cost(block, SinkLocation::OnEdge(tree, e, t));
            },
            0.0, tree.edge(e).length);
        if (value < best.second) best = {SinkLocation::OnEdge(tree, e, t), value};
      }
    }
    memo.emplace(block, best);
    return best;
  };

  PartitionSolution solution;
  solution.mode = mode;
  solution.solver = SolverKind::kExact;
  double best_value = kInf;
  ForEachCombination(tree.num_edges(), k - 1, [&](const std::vector<int>& c) {
    const Partition partition =
        partition_from_cuts(tree, std::vector<EdgeId>(c.begin(), c.end()));
    double value = 0.0;
    std::vector<SinkLocation> sinks;
    std::vector<double> costs;
    for (const Block& block : partition.blocks) {
      auto [sink, cost] = best_sink(block);
      sinks.push_back(sink);
      costs.push_back(cost);
      value = std::max(value, cost);
    }
    if (value < best_value) {
      best_value = value;
      solution.value = value;
      solution.block_costs = std::move(costs);
      solution.placement.partition = partition;
      solution.placement.sinks = std::move(sinks);
    }
    return true;
  });
  return solution;
}

CornerRegret corner_max_regret(const Tree& tree, const IntervalProfile& profile,
                               const Placement& placement, int k, SinkMode mode,
                               int cap) {
  ValidatePlacement(tree, placement);
  CornerTable table(tree, profile, k, mode, cap);
  return CornerMax(tree, placement, table);
}

RegretReport brute_solve_regret(const Tree& tree,
                                const IntervalProfile& profile, int k,
                                SinkMode mode, int cap) {
  if (k < 1 || k > tree.num_vertices()) {
    throw KOutOfRangeError("k must be in [1, n]");
  }
  CornerTable table(tree, profile, k, mode, cap);
  const auto& corners = table.corners();
  std::optional<Placement> best_placement;
  double best_value = kInf;

  if (mode == SinkMode::kDiscrete) {
    ForEachCombination(tree.num_edges(), k - 1, [&](const std::vector<int>& c) {
      const Partition partition =
          partition_from_cuts(tree, std::vector<EdgeId>(c.begin(), c.end()));
      std::vector<std::vector<VertexId>> choices;
      for (const Block& block : partition.blocks) {
        choices.push_back(block.vector());
      }
      ForEachProduct(choices, [&](const std::vector<VertexId>& pick) {
        Placement placement;
        placement.partition = partition;
        for (VertexId v : pick) {
          placement.sinks.push_back(SinkLocation::AtVertex(v));
        }
        const double value = CornerMax(tree, placement, table).value;
        if (value < best_value) {
          best_value = value;
          best_placement = std::move(placement);
        }
      });
      return true;
    });
  } else {
    // Regret splits by block: the worst corner for the placement is the worst
    // corner of one of its blocks, so each block's sink is chosen alone.
    std::map<Block, std::pair<SinkLocation, double>> memo;
    auto block_regret = [&](const Block& block, const SinkLocation& x) {
      double best = -kInf;
      for (size_t i = 0; i < corners.size(); ++i) {
        const DirectEvacuationOracle oracle(tree, corners[i]);
        best = std::max(best, oracle.cost(block, x) - table.Optimum(i));
      }
      return best;
    };
    auto best_sink = [&](const Block& block) {
      auto it = memo.find(block);
      if (it != memo.end()) return it->second;
      std::pair<SinkLocation, double> best{SinkLocation::AtVertex(0), kInf};
      for (VertexId v : block.members()) {
        const SinkLocation x = SinkLocation::AtVertex(v);
        const double value = block_regret(block, x);
        if (value < best.second) best = {x, value};
      }
      for (EdgeId e : EdgesInside(tree, block)) {
        auto [t, value] = GoldenMinimum(
            [&](double t) {
              return block_regret(block, SinkLocation::OnEdge(tree, e, t));
            },
            0.0, tree.edge(e).length);
        if (value < best.second) best = {SinkLocation::OnEdge(tree, e, t), value};
      }
      memo.emplace(block, best);
      return best;
    };
    ForEachCombination(tree.num_edges(), k - 1, [&](const std::vector<int>& c) {
      const Partition partition =
          partition_from_cuts(tree, std::vector<EdgeId>(c.begin(), c.end()));
      Placement placement;
      placement.partition = partition;
      double value = -kInf;
      for (const Block& block : partition.blocks) {
        auto [sink, regret] = best_sink(block);
        placement.sinks.push_back(sink);
        value = std::max(value, regret);
      }
      if (value < best_value) {
        best_value = value;
        best_placement = std::move(placement);
      }
      return true;
    });
  }

  RegretReport report;
  report.placement = *best_placement;
  const CornerRegret worst = CornerMax(tree, report.placement, table);
  report.max_regret = worst.value;
  report.worst_scenario = worst.scenario;
  const DirectEvacuationOracle oracle(tree, worst.scenario);
  for (size_t i = 0; i < report.placement.sinks.size(); ++i) {
    const double value = oracle.cost(report.placement.partition.blocks[i],
                                     report.placement.sinks[i]);
    if (value > report.theta_at_worst || i == 0) {
      report.theta_at_worst = value;
      report.worst_block = static_cast<int>(i);
    }
  }
  const auto at = std::find(corners.begin(), corners.end(), worst.scenario);
  report.theta_opt_at_worst = table.Optimum(at - corners.begin());
  return report;
}

RandomInstance random_instance(std::mt19937_64& rng, int n,
                               const RandomInstanceOptions& options) {
  if (n < 1) throw InvalidInputError("need at least one vertex");
  std::uniform_int_distribution<int> vertex(0, n - 1);
  std::uniform_int_distribution<int> length(1, options.max_length);
  std::uniform_int_distribution<int> weight(0, options.max_weight);

  std::vector<std::pair<VertexId, VertexId>> links;
  if (n == 2) links.emplace_back(0, 1);
  if (n > 2) {
    std::vector<VertexId> code(n - 2);
    for (auto& v : code) v = vertex(rng);
    std::vector<int> degree(n, 1);
    for (VertexId v : code) ++degree[v];
    std::priority_queue<VertexId, std::vector<VertexId>, std::greater<>> leaves;
    for (VertexId v = 0; v < n; ++v) {
      if (degree[v] == 1) leaves.push(v);
    }
    for (VertexId v : code) {
      const VertexId leaf = leaves.top();
      leaves.pop();
      links.emplace_back(leaf, v);
      if (--degree[v] == 1) leaves.push(v);
    }
    const VertexId a = leaves.top();
    leaves.pop();
    links.emplace_back(a, leaves.top());
  }
  std::vector<Edge> edges;
  for (auto [u, v] : links) {
    edges.push_back({u, v, static_cast<double>(length(rng))});
  }
  std::vector<double> lo(n);
  std::vector<double> hi(n);
  for (int v = 0; v < n; ++v) {
    const int a = weight(rng);
    const int b = weight(rng);
    lo[v] = std::min(a, b);
    hi[v] = std::max(a, b);
  }
  return {Tree::Build(n, std::move(edges), options.capacity),
          IntervalProfile(std::move(lo), std::move(hi))};
}

Scenario random_integral_scenario(std::mt19937_64& rng, int n,
                                  int max_weight) {
  std::uniform_int_distribution<int> weight(0, max_weight);
  std::vector<double> w(n);
  for (auto& value : w) value = weight(rng);
  return Scenario(std::move(w));
}

Scenario random_scenario(std::mt19937_64& rng, const IntervalProfile& profile) {
  std::vector<double> w(profile.size());
  for (VertexId v = 0; v < profile.size(); ++v) {
    w[v] = std::uniform_real_distribution<double>(profile.lo(v),
                                                  profile.hi(v))(rng);
    w[v] = std::clamp(w[v], profile.lo(v), profile.hi(v));
  }
  return Scenario(std::move(w));
}

Placement random_placement(std::mt19937_64& rng, const Tree& tree, int k,
                           SinkMode mode) {
  if (k < 1 || k > tree.num_vertices()) {
    throw KOutOfRangeError("k must be in [1, n]");
  }
  std::vector<EdgeId> edges(tree.num_edges());
  std::iota(edges.begin(), edges.end(), 0);
  std::shuffle(edges.begin(), edges.end(), rng);
  edges.resize(k - 1);
  const Partition partition = partition_from_cuts(tree, edges);
  std::vector<SinkLocation> sinks;
  for (const Block& block : partition.blocks) {
    const std::vector<EdgeId> inside = EdgesInside(tree, block);
    std::uniform_int_distribution<size_t> pick(0, block.size() - 1);
    if (mode == SinkMode::kContinuous && !inside.empty() &&
        std::bernoulli_distribution(0.5)(rng)) {
      const EdgeId e = inside[std::uniform_int_distribution<size_t>(
          0, inside.size() - 1)(rng)];
      const double t = std::uniform_real_distribution<double>(
          0.05, 0.95)(rng) * tree.edge(e).length;
      sinks.push_back(SinkLocation::OnEdge(tree, e, t));
    } else {
      sinks.push_back(SinkLocation::AtVertex(block.vector()[pick(rng)]));
    }
  }
  return MakePlacement(tree, partition.cut_edges, std::move(sinks));
}

}  // namespace evacnet
