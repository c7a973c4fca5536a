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

#include "evacnet/partition.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <utility>

namespace evacnet {
namespace {

constexpr int kBisectionSteps = 200;

struct OpenBlock {
  std::vector<VertexId> members;
  SinkLocation sink = SinkLocation::AtVertex(0);
};

// Vertices of `members` reachable from `start` without passing `skip`.
std::vector<VertexId> Reach(const Tree& tree, const std::vector<char>& mask,
                            VertexId start, VertexId skip,
                            std::vector<char>& seen) {
  std::vector<VertexId> out{start};
  seen[start] = 1;
  for (size_t i = 0; i < out.size(); ++i) {
    for (const Neighbor& nb : tree.neighbors(out[i])) {
      if (nb.vertex == skip || !mask[nb.vertex] || seen[nb.vertex]) continue;
      seen[nb.vertex] = 1;
      out.push_back(nb.vertex);
    }
  }
  return out;
}

// A vertex of the connected set `members` whose removal leaves pieces of at
// most half its size.
VertexId Centroid(const Tree& tree, std::span<const VertexId> members,
                  const std::vector<char>& mask) {
  const int total = static_cast<int>(members.size());
  std::vector<VertexId> order{members.front()};
  std::vector<VertexId> from(tree.num_vertices(), -1);
  std::vector<char> seen(tree.num_vertices(), 0);
  seen[members.front()] = 1;
  for (size_t i = 0; i < order.size(); ++i) {
    for (const Neighbor& nb : tree.neighbors(order[i])) {
      if (!mask[nb.vertex] || seen[nb.vertex]) continue;
      seen[nb.vertex] = 1;
      from[nb.vertex] = order[i];
      order.push_back(nb.vertex);
    }
  }
  std::vector<int> size(tree.num_vertices(), 1);
  std::vector<int> largest(tree.num_vertices(), 0);
  for (size_t i = order.size(); i-- > 1;) {
    const VertexId v = order[i];
    size[from[v]] += size[v];
    largest[from[v]] = std::max(largest[from[v]], size[v]);
  }
  VertexId best = order.front();
  int best_piece = total;
  for (VertexId v : order) {
    const int piece = std::max(largest[v], total - size[v]);
    if (piece < best_piece || (piece == best_piece && v < best)) {
      best = v;
      best_piece = piece;
    }
  }
  return best;
}

// Splits `block` along `edge` into (side of edge.u, side of edge.v).
std::pair<Block, Block> SplitAlong(const Tree& tree, const Block& block,
                                   EdgeId edge) {
  const Edge& e = tree.edge(edge);
  auto parts = branches(tree, block,
                        SinkLocation::OnEdge(tree, edge, e.length / 2));
  return {std::move(parts[0]), std::move(parts[1])};
}

std::vector<EdgeId> InternalEdges(const Tree& tree, const Block& block) {
  std::vector<EdgeId> out;
  for (VertexId v : block.members()) {
    for (const Neighbor& nb : tree.neighbors(v)) {
      if (nb.vertex > v && block.contains(nb.vertex)) out.push_back(nb.edge);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Splits blocks off leaves until there are k; costs never increase.
Placement PadToK(const Tree& tree, std::vector<OpenBlock> blocks, int k) {
  while (static_cast<int>(blocks.size()) < k) {
    size_t target = 0;
    for (size_t i = 1; i < blocks.size(); ++i) {
      if (blocks[i].members.size() > blocks[target].members.size()) target = i;
    }
    OpenBlock& big = blocks[target];
    std::vector<char> mask(tree.num_vertices(), 0);
    for (VertexId v : big.members) mask[v] = 1;
    VertexId sink_a = -1;
    VertexId sink_b = -1;
    if (big.sink.is_vertex()) {
      sink_a = big.sink.vertex();
    } else {
      sink_a = tree.edge(big.sink.edge()).u;
      sink_b = tree.edge(big.sink.edge()).v;
    }
    std::vector<VertexId> sorted = big.members;
    std::sort(sorted.begin(), sorted.end());
    VertexId leaf = -1;
    for (VertexId v : sorted) {
      if (v == sink_a || v == sink_b) continue;
      int degree = 0;
      for (const Neighbor& nb : tree.neighbors(v)) degree += mask[nb.vertex];
      if (degree <= 1) {
        leaf = v;
        break;
      }
    }
    if (leaf < 0) {
      // The block is exactly the sink edge: split it into its endpoints.
      big.members = {sink_a};
      big.sink = SinkLocation::AtVertex(sink_a);
      blocks.push_back({{sink_b}, SinkLocation::AtVertex(sink_b)});
      continue;
    }
    std::erase(big.members, leaf);
    blocks.push_back({{leaf}, SinkLocation::AtVertex(leaf)});
  }
  std::vector<int> block_of(tree.num_vertices(), -1);
  for (size_t i = 0; i < blocks.size(); ++i) {
    for (VertexId v : blocks[i].members) block_of[v] = static_cast<int>(i);
  }
  std::vector<EdgeId> cuts;
  for (EdgeId e = 0; e < tree.num_edges(); ++e) {
    if (block_of[tree.edge(e).u] != block_of[tree.edge(e).v]) cuts.push_back(e);
  }
  std::vector<SinkLocation> sinks;
  for (const OpenBlock& b : blocks) sinks.push_back(b.sink);
  return MakePlacement(tree, std::move(cuts), std::move(sinks));
}

bool AtMost(double value, double threshold) {
  return value <= threshold + kEpsilon;
}

Feasibility ExhaustiveFeasible(const CostOracle& oracle, int k,
                               double threshold, SinkMode mode) {
  const Tree& tree = oracle.tree();
  std::map<Block, std::optional<SinkLocation>> memo;
  Feasibility result;
  ForEachCombination(tree.num_edges(), k - 1, [&](const std::vector<int>& cuts) {
    const Partition partition =
        partition_from_cuts(tree, std::vector<EdgeId>(cuts.begin(), cuts.end()));
    std::vector<SinkLocation> sinks;
    for (const Block& block : partition.blocks) {
      auto it = memo.find(block);
      if (it == memo.end()) {
        it = memo.emplace(block, find_sink_within(oracle, block.members(),
                                                  threshold, mode))
                 .first;
      }
      if (!it->second) return true;
      sinks.push_back(*it->second);
    }
    result.feasible = true;
    result.witness = MakePlacement(tree, partition.cut_edges, std::move(sinks));
    return false;
  });
  return result;
}

}  // namespace

std::string_view ToString(SinkMode mode) {
  return mode == SinkMode::kDiscrete ? "discrete" : "continuous";
}

std::string_view ToString(SolverKind solver) {
  return solver == SolverKind::kExact ? "exact" : "threshold";
}

SinkMode ParseSinkMode(std::string_view text) {
  if (text == "discrete") return SinkMode::kDiscrete;
  if (text == "continuous") return SinkMode::kContinuous;
  throw InvalidInputError("unknown mode '" + std::string(text) + "'");
}

SolverKind ParseSolverKind(std::string_view text) {
  if (text == "exact") return SolverKind::kExact;
  if (text == "threshold") return SolverKind::kThreshold;
  throw InvalidInputError("unknown solver '" + std::string(text) + "'");
}

long long CountCombinations(int m, int r) {
  if (r < 0 || r > m) return 0;
  r = std::min(r, m - r);
  long double c = 1;
  for (int i = 1; i <= r; ++i) c = c * (m - r + i) / i;
  if (c > 4e18L) return std::numeric_limits<long long>::max();
  return static_cast<long long>(std::llround(static_cast<double>(c)));
}

double CostOracle::cost(const Block& block, const SinkLocation& x) const {
  double best = 0.0;
  for (const Block& branch : branches(tree(), block, x)) {
    best = std::max(best, branch_cost(branch.members(), x));
  }
  return best;
}

bool CostOracle::branch_cost_at_most(std::span<const VertexId> branch,
                                     const SinkLocation& x,
                                     double threshold) const {
  return AtMost(branch_cost(branch, x), threshold);
}

EvacuationOracle::EvacuationOracle(const Tree& tree, Scenario scenario)
    : CostOracle(tree), scenario_(std::move(scenario)) {
  if (scenario_.size() != tree.num_vertices()) {
    throw InvalidInputError("scenario size does not match the tree");
  }
}

double EvacuationOracle::branch_cost(std::span<const VertexId> branch,
                                     const SinkLocation& x) const {
  return SortedBranch(tree(), branch, x)
      .Evaluate(scenario_.weights(), tree().capacity());
}

WeightedCenterOracle::WeightedCenterOracle(const Tree& tree, Scenario scenario)
    : CostOracle(tree), scenario_(std::move(scenario)) {
  if (scenario_.size() != tree.num_vertices()) {
    throw InvalidInputError("scenario size does not match the tree");
  }
}

double WeightedCenterOracle::branch_cost(std::span<const VertexId> branch,
                                         const SinkLocation& x) const {
  double best = 0.0;
  for (VertexId v : branch) {
    best = std::max(best, scenario_[v] * tree().distance(x, v));
  }
  return best;
}

SinkChoice best_vertex_sink(const Block& block, const CostOracle& oracle) {
  if (block.empty()) throw InvalidInputError("empty block");
  SinkChoice best;
  bool have = false;
  for (VertexId v : block.members()) {
    const SinkLocation x = SinkLocation::AtVertex(v);
    const double value = oracle.cost(block, x);
    if (!have || value < best.value) {
      best = {x, value};
      have = true;
    }
  }
  return best;
}

EdgeSinkSolution best_edge_sink(const Block& side_first,
                                const Block& side_second, EdgeId edge,
                                const CostOracle& oracle,
                                std::optional<double> threshold) {
  if (!oracle.supports_continuous()) {
    throw OracleNotContinuousError("oracle does not support edge sinks");
  }
  const Tree& tree = oracle.tree();
  const Edge& e = tree.edge(edge);
  if (!side_first.contains(e.u) || !side_second.contains(e.v)) {
    throw EdgeNotInBlockError("sides do not match the edge orientation");
  }
  std::vector<VertexId> all = side_first.vector();
  all.insert(all.end(), side_second.members().begin(),
             side_second.members().end());
  const Block whole(std::move(all));
  const double length = e.length;
  const SinkLocation at_u = SinkLocation::AtVertex(e.u);
  const SinkLocation at_v = SinkLocation::AtVertex(e.v);

  EdgeSinkSolution out;
  out.edge = edge;
  out.point = at_u;
  out.value = oracle.cost(whole, at_u);
  const double value_v = oracle.cost(whole, at_v);

  // Side costs as the sink slides from u (t = 0) to v (t = length).
  auto first_side = [&](double t) {
    return oracle.branch_cost(side_first.members(),
                              SinkLocation::OnEdge(tree, edge, t));
  };
  auto second_side = [&](double t) {
    return oracle.branch_cost(side_second.members(),
                              SinkLocation::OnEdge(tree, edge, t));
  };

  std::optional<double> interior_t;
  double interior_value = 0.0;
  double first_at_v = 0.0;
  if (oracle.unit_slope_on_edges()) {
    // first side: max(A - (length - t), 0); second side: max(B - t, 0).
    first_at_v = oracle.branch_cost(side_first.members(), at_v);
    const double second_at_u = oracle.branch_cost(side_second.members(), at_u);
    const double t = (second_at_u - first_at_v + length) / 2;
    if (t > 0 && t < length) {
      interior_t = t;
      interior_value = std::max(0.0, first_at_v - length + t);
    }
  } else {
    double lo = 0.0;
    double hi = length;
    for (int step = 0; step < kBisectionSteps && hi - lo > 0; ++step) {
      const double mid = lo + (hi - lo) / 2;
      if (mid <= lo || mid >= hi) break;
      if (first_side(mid) < second_side(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    for (double t : {lo, hi}) {
      if (!(t > 0 && t < length)) continue;
      const double value = std::max(first_side(t), second_side(t));
      if (!interior_t || value < interior_value) {
        interior_t = t;
        interior_value = value;
      }
    }
  }
  if (interior_t && interior_value < out.value) {
    out.value = interior_value;
    out.point = SinkLocation::OnEdge(tree, edge, *interior_t);
  }
  if (value_v < out.value) {
    out.value = value_v;
    out.point = at_v;
  }

  if (threshold) {
    const double limit = *threshold;
    const double at_far = oracle.unit_slope_on_edges()
                              ? first_at_v
                              : oracle.branch_cost(side_first.members(), at_v);
    if (AtMost(at_far, limit)) {
      out.reach = at_v;
    } else {
      std::optional<double> reach_t;
      if (oracle.unit_slope_on_edges()) {
        const double t = limit + length - at_far;
        if (t > 0) reach_t = std::min(t, length);
      } else {
        double lo = 0.0;
        double hi = length;
        for (int step = 0; step < kBisectionSteps; ++step) {
          const double mid = lo + (hi - lo) / 2;
          if (mid <= lo || mid >= hi) break;
          if (AtMost(first_side(mid), limit)) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        if (lo > 0) reach_t = lo;
      }
      if (reach_t && *reach_t < length) {
        out.reach = SinkLocation::OnEdge(tree, edge, *reach_t);
      } else if (AtMost(oracle.cost(side_first, at_u), limit)) {
        out.reach = at_u;
      }
    }
  }
  return out;
}

SinkChoice best_block_sink(const Block& block, const CostOracle& oracle,
                           SinkMode mode) {
  SinkChoice best = best_vertex_sink(block, oracle);
  if (mode == SinkMode::kDiscrete) return best;
  const Tree& tree = oracle.tree();
  for (EdgeId edge : InternalEdges(tree, block)) {
    auto [first, second] = SplitAlong(tree, block, edge);
    const EdgeSinkSolution candidate =
        best_edge_sink(first, second, edge, oracle);
    if (candidate.value < best.value) {
      best = {candidate.point, candidate.value};
    }
  }
  return best;
}

std::optional<SinkLocation> find_sink_within(const CostOracle& oracle,
                                             std::span<const VertexId> block,
                                             double threshold, SinkMode mode) {
  const Tree& tree = oracle.tree();
  if (block.empty()) throw InvalidInputError("empty block");
  std::vector<char> in_block(tree.num_vertices(), 0);
  for (VertexId v : block) in_block[v] = 1;
  std::vector<char> candidate = in_block;
  std::vector<VertexId> region(block.begin(), block.end());

  while (!region.empty()) {
    const VertexId c = Centroid(tree, region, candidate);
    const SinkLocation at_c = SinkLocation::AtVertex(c);
    std::vector<char> seen(tree.num_vertices(), 0);
    seen[c] = 1;
    int violations = 0;
    std::vector<VertexId> heavy;
    VertexId heavy_root = -1;
    for (const Neighbor& nb : tree.neighbors(c)) {
      if (!in_block[nb.vertex]) continue;
      auto part = Reach(tree, in_block, nb.vertex, c, seen);
      if (oracle.branch_cost_at_most(part, at_c, threshold)) continue;
      if (++violations > 1) break;
      heavy = std::move(part);
      heavy_root = nb.vertex;
    }
    if (violations == 0) return at_c;
    // Any sink outside the single over-threshold branch sees every other
    // over-threshold branch from farther away.
    if (violations > 1) return std::nullopt;

    if (mode == SinkMode::kContinuous) {
      const EdgeId edge = *tree.edge_between(c, heavy_root);
      std::vector<char> heavy_mask(tree.num_vertices(), 0);
      for (VertexId v : heavy) heavy_mask[v] = 1;
      std::vector<VertexId> rest;
      for (VertexId v : block) {
        if (!heavy_mask[v]) rest.push_back(v);
      }
      Block heavy_block(heavy);
      Block rest_block(std::move(rest));
      const bool heavy_first = tree.edge(edge).u == heavy_root;
      const EdgeSinkSolution on_edge =
          heavy_first ? best_edge_sink(heavy_block, rest_block, edge, oracle)
                      : best_edge_sink(rest_block, heavy_block, edge, oracle);
      if (AtMost(on_edge.value, threshold)) return on_edge.point;
    }

    std::vector<char> heavy_mask(tree.num_vertices(), 0);
    for (VertexId v : heavy) heavy_mask[v] = 1;
    std::vector<VertexId> next;
    for (VertexId v : region) {
      if (heavy_mask[v]) {
        next.push_back(v);
      } else {
        candidate[v] = 0;
      }
    }
    region = std::move(next);
  }
  return std::nullopt;
}

Feasibility greedy_feasible(const CostOracle& oracle, int k, double threshold,
                            SinkMode mode) {
  const Tree& tree = oracle.tree();
  const int n = tree.num_vertices();
  // Post-order of the tree rooted at 0.
  std::vector<VertexId> order{0};
  std::vector<std::vector<VertexId>> children(n);
  for (size_t i = 0; i < order.size(); ++i) {
    for (const Neighbor& nb : tree.neighbors(order[i])) {
      if (nb.vertex == tree.parent(order[i])) continue;
      children[order[i]].push_back(nb.vertex);
      order.push_back(nb.vertex);
    }
  }
  std::reverse(order.begin(), order.end());

  std::vector<OpenBlock> open(n);
  std::vector<OpenBlock> closed;
  Feasibility result;
  for (VertexId v : order) {
    std::vector<VertexId> members{v};
    for (VertexId c : children[v]) {
      members.insert(members.end(), open[c].members.begin(),
                     open[c].members.end());
    }
    auto sink = find_sink_within(oracle, members, threshold, mode);
    if (!sink) {
      // Close child parts, most expensive to pull up to v first.
      std::vector<std::pair<double, VertexId>> merge_cost;
      for (VertexId c : children[v]) {
        merge_cost.emplace_back(
            oracle.branch_cost(open[c].members, SinkLocation::AtVertex(v)), c);
      }
      std::sort(merge_cost.begin(), merge_cost.end(),
                [](const auto& a, const auto& b) {
                  return a.first != b.first ? a.first > b.first
                                            : a.second < b.second;
                });
      std::vector<char> dropped(n, 0);
      for (const auto& [unused, c] : merge_cost) {
        for (VertexId u : open[c].members) dropped[u] = 1;
        closed.push_back(std::move(open[c]));
        if (static_cast<int>(closed.size()) + 1 > k) return result;
        std::erase_if(members, [&](VertexId u) { return dropped[u] != 0; });
        sink = find_sink_within(oracle, members, threshold, mode);
        if (sink) break;
      }
      if (!sink) sink = SinkLocation::AtVertex(v);
    }
    open[v] = {std::move(members), *sink};
  }
  closed.push_back(std::move(open[0]));
  if (static_cast<int>(closed.size()) > k) return result;
  result.feasible = true;
  result.witness = PadToK(tree, std::move(closed), k);
  return result;
}

Feasibility feasible(const CostOracle& oracle, int k, double threshold,
                     SinkMode mode, const ThresholdOptions& options) {
  const Tree& tree = oracle.tree();
  if (k < 1 || k > tree.num_vertices()) {
    throw KOutOfRangeError("k must be in [1, n]");
  }
  Feasibility greedy = greedy_feasible(oracle, k, threshold, mode);
  if (greedy.feasible || !options.exhaustive_fallback) return greedy;
  if (CountCombinations(tree.num_edges(), k - 1) > options.fallback_limit) {
    return greedy;
  }
  return ExhaustiveFeasible(oracle, k, threshold, mode);
}

PartitionSolution finalize_partition(const CostOracle& oracle,
                                     const Partition& partition, SinkMode mode,
                                     SolverKind solver) {
  PartitionSolution solution;
  solution.mode = mode;
  solution.solver = solver;
  solution.placement.partition = partition;
  for (const Block& block : partition.blocks) {
    const SinkChoice choice = best_block_sink(block, oracle, mode);
    solution.placement.sinks.push_back(choice.sink);
    solution.block_costs.push_back(choice.value);
    solution.value = std::max(solution.value, choice.value);
  }
  return solution;
}

PartitionSolution solve_minmax_partition(const CostOracle& oracle, int k,
                                         SinkMode mode, SolverKind solver,
                                         const ThresholdOptions& options) {
  const Tree& tree = oracle.tree();
  const int n = tree.num_vertices();
  if (k < 1 || k > n) throw KOutOfRangeError("k must be in [1, n]");
  if (mode == SinkMode::kContinuous && !oracle.supports_continuous()) {
    throw OracleNotContinuousError("oracle does not support edge sinks");
  }

  if (solver == SolverKind::kExact) {
    std::map<Block, SinkChoice> memo;
    std::optional<Partition> best_partition;
    double best_value = std::numeric_limits<double>::infinity();
    ForEachCombination(tree.num_edges(), k - 1, [&](const std::vector<int>& c) {
      Partition partition =
          partition_from_cuts(tree, std::vector<EdgeId>(c.begin(), c.end()));
      double value = 0.0;
      for (const Block& block : partition.blocks) {
        auto it = memo.find(block);
        if (it == memo.end()) {
          it = memo.emplace(block, best_block_sink(block, oracle, mode)).first;
        }
        value = std::max(value, it->second.value);
        if (value >= best_value) break;
      }
      if (value < best_value) {
        best_value = value;
        best_partition = std::move(partition);
      }
      return true;
    });
    return finalize_partition(oracle, *best_partition, mode, solver);
  }

  std::optional<Placement> witness;
  if (Feasibility at_zero = feasible(oracle, k, 0.0, mode, options);
      at_zero.feasible) {
    witness = std::move(at_zero.witness);
  } else {
    std::vector<VertexId> all(n);
    std::iota(all.begin(), all.end(), 0);
    double lo = 0.0;
    double hi = oracle.cost(Block(all), SinkLocation::AtVertex(0));
    Feasibility top = feasible(oracle, k, hi, mode, options);
    if (!top.feasible) {
      throw EvacError("threshold search lost feasibility at the upper bound");
    }
    witness = std::move(top.witness);
    while (hi - lo > std::max(1e-9, 1e-9 * hi)) {
      const double mid = lo + (hi - lo) / 2;
      Feasibility probe = feasible(oracle, k, mid, mode, options);
      if (probe.feasible) {
        hi = mid;
        witness = std::move(probe.witness);
      } else {
        lo = mid;
      }
    }
  }
  return finalize_partition(oracle, witness->partition, mode, solver);
}

}  // namespace evacnet
