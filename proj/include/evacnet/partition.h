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

// Minmax k-center partitioning of a tree under a block cost oracle.
//
// A cost oracle f(block, x) must be minmax monotone:
//   - f({x}, x) = 0 and f >= 0,
//   - growing the block never lowers the cost (fixed sink),
//   - moving the sink one edge outward never lowers the cost,
//   - f(block, x) is the max over the branches B of f(B + {x}, x).
// In continuous mode, f(S + {x}, x) for x sliding along an edge away from S
// must be non-decreasing, and continuous except at the starting vertex.
//
// The partition problem picks k - 1 cut edges and one sink per block to
// minimise the largest block cost. Two solvers are provided: an exhaustive
// enumerator, and a threshold search that bisects on the answer and answers
// each "is T achievable with k blocks?" question with a bottom-up greedy.

#ifndef EVACNET_PARTITION_H_
#define EVACNET_PARTITION_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evacnet/evacuation.h"
#include "evacnet/tree.h"

namespace evacnet {

enum class SinkMode { kDiscrete, kContinuous };
enum class SolverKind { kExact, kThreshold };

std::string_view ToString(SinkMode mode);
std::string_view ToString(SolverKind solver);
SinkMode ParseSinkMode(std::string_view text);
SolverKind ParseSolverKind(std::string_view text);

class KOutOfRangeError : public EvacError {
 public:
  using EvacError::EvacError;
};
class OracleNotContinuousError : public EvacError {
 public:
  using EvacError::EvacError;
};

class CostOracle {
 public:
  explicit CostOracle(const Tree& tree) : tree_(&tree) {}
  virtual ~CostOracle() = default;

  const Tree& tree() const { return *tree_; }

  // f(branch + {x}, x) where `branch` is a connected vertex set adjacent to
  // x that does not contain it.
  virtual double branch_cost(std::span<const VertexId> branch,
                             const SinkLocation& x) const = 0;

  // f(block, x). The default composes branch costs.
  virtual double cost(const Block& block, const SinkLocation& x) const;

  // Whether branch_cost(branch, x) <= threshold + kEpsilon. Oracles with
  // expensive values may decide this without computing the value.
  virtual bool branch_cost_at_most(std::span<const VertexId> branch,
                                   const SinkLocation& x,
                                   double threshold) const;

  virtual bool supports_continuous() const { return true; }

  // True when sliding the sink along an edge toward S shifts the cost
  // linearly: f(S + {x}, x) = max(f(S + {end}, end) - d(x, end), 0) for x
  // strictly inside the edge. Enables closed-form edge minimisation.
  virtual bool unit_slope_on_edges() const { return false; }

 private:
  const Tree* tree_;
};

// Evacuation time under a fixed scenario.
class EvacuationOracle : public CostOracle {
 public:
  EvacuationOracle(const Tree& tree, Scenario scenario);

  double branch_cost(std::span<const VertexId> branch,
                     const SinkLocation& x) const override;
  bool unit_slope_on_edges() const override { return true; }

  const Scenario& scenario() const { return scenario_; }

 private:
  Scenario scenario_;
};

// Weighted k-center cost: max over v of w_v * d(x, v).
class WeightedCenterOracle : public CostOracle {
 public:
  WeightedCenterOracle(const Tree& tree, Scenario scenario);

  double branch_cost(std::span<const VertexId> branch,
                     const SinkLocation& x) const override;

 private:
  Scenario scenario_;
};

struct SinkChoice {
  SinkLocation sink = SinkLocation::AtVertex(0);
  double value = 0.0;
};

struct EdgeSinkSolution {
  EdgeId edge = -1;
  // Smallest achievable max of the two side costs over the closed edge.
  double value = 0.0;
  SinkLocation point = SinkLocation::AtVertex(0);
  // Farthest point from the first endpoint at which the first side still
  // costs at most the requested threshold. Unset without a threshold or when
  // no point qualifies.
  std::optional<SinkLocation> reach;
};

struct PartitionSolution {
  double value = 0.0;
  Placement placement;
  std::vector<double> block_costs;
  SinkMode mode = SinkMode::kDiscrete;
  SolverKind solver = SolverKind::kExact;
};

struct Feasibility {
  bool feasible = false;
  std::optional<Placement> witness;
};

struct ThresholdOptions {
  // When the greedy fails, decide exactly by enumerating cut sets if there
  // are at most `fallback_limit` of them.
  bool exhaustive_fallback = true;
  long long fallback_limit = 20000;
};

// Vertex of `block` with the smallest cost; ties go to the smallest id.
SinkChoice best_vertex_sink(const Block& block, const CostOracle& oracle);

// Best sink on the closed edge `edge` joining side_first (which holds the
// edge's first endpoint) and side_second. Throws OracleNotContinuousError.
EdgeSinkSolution best_edge_sink(const Block& side_first,
                                const Block& side_second, EdgeId edge,
                                const CostOracle& oracle,
                                std::optional<double> threshold = {});

// Best sink over the vertices of `block` and, in continuous mode, its
// internal edges. Vertices win ties.
SinkChoice best_block_sink(const Block& block, const CostOracle& oracle,
                           SinkMode mode);

// Some sink serving `block` at cost <= threshold, if one exists.
std::optional<SinkLocation> find_sink_within(const CostOracle& oracle,
                                             std::span<const VertexId> block,
                                             double threshold, SinkMode mode);

// Whether some placement with at most k blocks has cost <= threshold. The
// witness is padded to exactly k blocks.
Feasibility feasible(const CostOracle& oracle, int k, double threshold,
                     SinkMode mode, const ThresholdOptions& options = {});

// Bottom-up greedy only; a false answer may be wrong.
Feasibility greedy_feasible(const CostOracle& oracle, int k, double threshold,
                            SinkMode mode);

PartitionSolution solve_minmax_partition(const CostOracle& oracle, int k,
                                         SinkMode mode, SolverKind solver,
                                         const ThresholdOptions& options = {});

// Rescores `placement` with each block's best sink.
PartitionSolution finalize_partition(const CostOracle& oracle,
                                     const Partition& partition, SinkMode mode,
                                     SolverKind solver);

// Calls `visit` with every sorted r-subset of {0, ..., m-1} in
// lexicographic order until it returns false.
template <typename Visit>
void ForEachCombination(int m, int r, Visit&& visit) {
  std::vector<int> pick(r);
  for (int i = 0; i < r; ++i) pick[i] = i;
  if (r > m) return;
  while (true) {
    if (!visit(static_cast<const std::vector<int>&>(pick))) return;
    int i = r - 1;
    while (i >= 0 && pick[i] == m - r + i) --i;
    if (i < 0) return;
    ++pick[i];
    for (int j = i + 1; j < r; ++j) pick[j] = pick[j - 1] + 1;
  }
}

// C(m, r), saturating at a large value.
long long CountCombinations(int m, int r);

}  // namespace evacnet

#endif  // EVACNET_PARTITION_H_
