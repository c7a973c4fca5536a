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

// Evacuation time of confluent flow to a single sink on a uniform-capacity
// tree.
//
// For a branch B hanging off sink x, the last particle of B reaches x at
//
//     max over v in B with W(v) > 0 of  d(v, x) + W(v) / c,
//
// where W(v) is the total weight of the vertices of B at distance >= d(v, x)
// from x (the "frontier" of v). Flow from different branches never meets
// before x, so the cost of a block is the max over its branches. Flow already
// at a vertex sink costs nothing. The same expression holds when x lies
// inside an edge: only the distances change.

#ifndef EVACNET_EVACUATION_H_
#define EVACNET_EVACUATION_H_

#include <compare>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "evacnet/tree.h"

namespace evacnet {

// Comparison tolerance for floating point evacuation quantities.
inline constexpr double kEpsilon = 1e-9;

// One non-negative weight per vertex.
class Scenario {
 public:
  Scenario() = default;
  explicit Scenario(std::vector<double> weights);

  std::span<const double> weights() const { return weights_; }
  double operator[](VertexId v) const { return weights_[v]; }
  int size() const { return static_cast<int>(weights_.size()); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
  friend auto operator<=>(const Scenario&, const Scenario&) = default;

 private:
  std::vector<double> weights_;
};

struct ScenarioHash {
  size_t operator()(const Scenario& s) const;
};

// Vertices of one branch ordered by distance to the sink, reusable across
// scenarios.
class SortedBranch {
 public:
  SortedBranch(const Tree& tree, std::span<const VertexId> branch,
               const SinkLocation& x);

  // Evacuation time of the branch toward the sink under `weights`.
  double Evaluate(std::span<const double> weights, double capacity) const;

  // (distance, vertex), farthest first; equal distances by vertex id.
  const std::vector<std::pair<double, VertexId>>& far_to_near() const {
    return order_;
  }

 private:
  std::vector<std::pair<double, VertexId>> order_;
};

struct FrontierEntry {
  VertexId vertex;
  double distance;       // to the sink
  double suffix_weight;  // weight at distance >= `distance` in the branch
};

struct EvacProfile {
  // One list per branch, by non-decreasing distance.
  std::vector<std::vector<FrontierEntry>> branches;
  double value = 0.0;
};

// {v in block : d(v, x) >= d(pivot, x)}, excluding the sink vertex itself.
std::vector<VertexId> frontier_set(const Tree& tree, const Block& block,
                                   const SinkLocation& x, VertexId pivot);
double frontier_weight(const Tree& tree, const Block& block,
                       const SinkLocation& x, VertexId pivot,
                       const Scenario& s);

// Time for all of `block` to reach x. x may be a vertex or an edge point.
double evac_time(const Tree& tree, const Block& block, const SinkLocation& x,
                 const Scenario& s);
// Same as evac_time but requires x strictly inside an edge of the block.
double evac_time_edgepoint(const Tree& tree, const Block& block,
                           const SinkLocation& x, const Scenario& s);
// Time for `branch` (a vertex set not containing x, adjacent to x) to reach x.
double branch_evac_time(const Tree& tree, std::span<const VertexId> branch,
                        const SinkLocation& x, const Scenario& s);

EvacProfile evac_profile(const Tree& tree, const Block& block,
                         const SinkLocation& x, const Scenario& s);

std::vector<double> block_costs(const Tree& tree, const Placement& placement,
                                const Scenario& s);
double placement_cost(const Tree& tree, const Placement& placement,
                      const Scenario& s);

}  // namespace evacnet

#endif  // EVACNET_EVACUATION_H_
