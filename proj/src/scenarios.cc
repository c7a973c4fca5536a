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

#include "evacnet/scenarios.h"

#include <cmath>
#include <unordered_set>
#include <utility>

namespace evacnet {
namespace {

class FamilyBuilder {
 public:
  void Add(Scenario s, ScenarioOrigin origin) {
    if (seen_.insert(s).second) {
      family_.push_back({std::move(s), origin});
    }
  }
  ScenarioFamily Take() { return std::move(family_); }

 private:
  std::unordered_set<Scenario, ScenarioHash> seen_;
  ScenarioFamily family_;
};

// Frontier scenarios of one branch, farthest pivot first.
void AddBranch(const Tree& tree, const IntervalProfile& profile,
               std::span<const VertexId> branch, const SinkLocation& x,
               int block_index, int branch_index, FamilyBuilder& builder) {
  const SortedBranch sorted(tree, branch, x);
  const auto& order = sorted.far_to_near();
  std::vector<double> weights(profile.size());
  for (VertexId v = 0; v < profile.size(); ++v) weights[v] = profile.lo(v);
  for (size_t i = 0; i < order.size();) {
    const double d = order[i].first;
    const VertexId pivot = order[i].second;
    for (; i < order.size() && order[i].first == d; ++i) {
      weights[order[i].second] = profile.hi(order[i].second);
    }
    builder.Add(Scenario(weights), {block_index, branch_index, pivot});
  }
}

void AddBlock(const Tree& tree, const IntervalProfile& profile,
              const Block& block, const SinkLocation& x, int block_index,
              FamilyBuilder& builder) {
  builder.Add(profile.all_lo(), {block_index, -1, -1});
  const auto parts = branches(tree, block, x);
  for (size_t j = 0; j < parts.size(); ++j) {
    AddBranch(tree, profile, parts[j].members(), x, block_index,
              static_cast<int>(j), builder);
  }
}

void CheckProfile(const Tree& tree, const IntervalProfile& profile) {
  if (profile.size() != tree.num_vertices()) {
    throw InvalidInputError("interval profile size does not match the tree");
  }
}

}  // namespace

IntervalProfile::IntervalProfile(std::vector<double> lo, std::vector<double> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size()) {
    throw InvalidInputError("lo and hi must have the same length");
  }
  for (size_t v = 0; v < lo_.size(); ++v) {
    if (!std::isfinite(lo_[v]) || !std::isfinite(hi_[v]) || !(lo_[v] >= 0.0) ||
        !(lo_[v] <= hi_[v])) {
      throw InvalidInputError("vertex " + std::to_string(v) +
                              ": need 0 <= lo <= hi");
    }
  }
}

Scenario extreme_scenario(const IntervalProfile& profile,
                          std::span<const VertexId> upper) {
  std::vector<double> weights(profile.size());
  for (VertexId v = 0; v < profile.size(); ++v) weights[v] = profile.lo(v);
  for (VertexId v : upper) {
    if (v < 0 || v >= profile.size()) {
      throw InvalidInputError("vertex id " + std::to_string(v) +
                              " out of range");
    }
    weights[v] = profile.hi(v);
  }
  return Scenario(std::move(weights));
}

ScenarioFamily scenario_family_block(const Tree& tree,
                                     const IntervalProfile& profile,
                                     const Block& block,
                                     const SinkLocation& x) {
  CheckProfile(tree, profile);
  FamilyBuilder builder;
  AddBlock(tree, profile, block, x, 0, builder);
  return builder.Take();
}

ScenarioFamily scenario_family_branch(const Tree& tree,
                                      const IntervalProfile& profile,
                                      std::span<const VertexId> branch,
                                      const SinkLocation& x) {
  CheckProfile(tree, profile);
  FamilyBuilder builder;
  builder.Add(profile.all_lo(), {0, -1, -1});
  AddBranch(tree, profile, branch, x, 0, 0, builder);
  return builder.Take();
}

ScenarioFamily scenario_family_placement(const Tree& tree,
                                         const IntervalProfile& profile,
                                         const Placement& placement) {
  CheckProfile(tree, profile);
  ValidatePlacement(tree, placement);
  FamilyBuilder builder;
  for (size_t i = 0; i < placement.sinks.size(); ++i) {
    AddBlock(tree, profile, placement.partition.blocks[i], placement.sinks[i],
             static_cast<int>(i), builder);
  }
  return builder.Take();
}

}  // namespace evacnet
