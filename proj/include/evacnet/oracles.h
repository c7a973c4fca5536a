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

// Slow reference implementations. Nothing here shares code with the fast
// paths beyond the tree model itself.

#ifndef EVACNET_ORACLES_H_
#define EVACNET_ORACLES_H_

#include <cstdint>
#include <random>
#include <vector>

#include "evacnet/evacuation.h"
#include "evacnet/partition.h"
#include "evacnet/regret.h"
#include "evacnet/scenarios.h"
#include "evacnet/tree.h"

namespace evacnet {

class NonIntegralInstanceError : public EvacError {
 public:
  using EvacError::EvacError;
};
class TooLargeForBruteForceError : public EvacError {
 public:
  using EvacError::EvacError;
};

// Token-level simulation of confluent flow toward the vertex sink x. Every
// unit of weight is a token; an edge of length L admits c tokens per unit of
// time and delays each by L. A vertex forwards the waiting token whose origin
// is closest to x first, then the one with the smaller origin id. Requires
// integer lengths, weights and capacity.
double simulate_evacuation(const Tree& tree, const Block& block, VertexId x,
                           const Scenario& s);

// Evacuation time evaluated literally from the frontier definition, one
// O(b^2) pass per branch, with its own branch discovery.
class DirectEvacuationOracle : public CostOracle {
 public:
  DirectEvacuationOracle(const Tree& tree, Scenario scenario);

  double branch_cost(std::span<const VertexId> branch,
                     const SinkLocation& x) const override;
  double cost(const Block& block, const SinkLocation& x) const override;

 private:
  Scenario scenario_;
};

// Enumerates every cut set. Per block: every vertex, and in continuous mode
// a golden-section minimisation of the cost over each open internal edge.
PartitionSolution brute_solve_partition(const CostOracle& oracle, int k,
                                        SinkMode mode);

// Smallest cost over `samples` evenly spaced interior points of `edge`.
double grid_edge_minimum(const CostOracle& oracle, const Block& block,
                         EdgeId edge, int samples = 10000);

struct CornerRegret {
  double value = 0.0;
  Scenario scenario;
};

inline constexpr int kDefaultCornerCap = 12;

// Exact max-regret over all 2^n corners of the weight box, with optimal
// times from brute_solve_partition. Ties go to the lexicographically first
// corner.
CornerRegret corner_max_regret(const Tree& tree, const IntervalProfile& profile,
                               const Placement& placement, int k, SinkMode mode,
                               int cap = kDefaultCornerCap);

// min over all placements of corner_max_regret.
RegretReport brute_solve_regret(const Tree& tree,
                                const IntervalProfile& profile, int k,
                                SinkMode mode, int cap = kDefaultCornerCap);

struct RandomInstanceOptions {
  int max_length = 4;
  int max_weight = 6;
  double capacity = 1.0;
};

struct RandomInstance {
  Tree tree;
  IntervalProfile profile;
};

// Uniform labelled tree on n vertices from a random Pruefer sequence, with
// integer lengths in [1, max_length] and integer interval endpoints in
// [0, max_weight].
RandomInstance random_instance(std::mt19937_64& rng, int n,
                               const RandomInstanceOptions& options = {});

// Integer weights in [0, max_weight].
Scenario random_integral_scenario(std::mt19937_64& rng, int n,
                                  int max_weight);

// Uniform over the weight box.
Scenario random_scenario(std::mt19937_64& rng, const IntervalProfile& profile);

// A uniformly random cut set with a random sink per block; continuous mode
// may put sinks inside internal edges.
Placement random_placement(std::mt19937_64& rng, const Tree& tree, int k,
                           SinkMode mode);

}  // namespace evacnet

#endif  // EVACNET_ORACLES_H_
