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

#include "evacnet/evacuation.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

namespace evacnet {

Scenario::Scenario(std::vector<double> weights) : weights_(std::move(weights)) {
  for (size_t v = 0; v < weights_.size(); ++v) {
    if (!(weights_[v] >= 0.0) || !std::isfinite(weights_[v])) {
      throw InvalidInputError("scenario weight of vertex " +
                              std::to_string(v) +
                              " must be finite and non-negative");
    }
  }
}

size_t ScenarioHash::operator()(const Scenario& s) const {
  uint64_t h = 1469598103934665603ull;
  for (double w : s.weights()) {
    h ^= std::bit_cast<uint64_t>(w + 0.0);
    h *= 1099511628211ull;
  }
  return static_cast<size_t>(h);
}

SortedBranch::SortedBranch(const Tree& tree, std::span<const VertexId> branch,
                           const SinkLocation& x) {
  order_.reserve(branch.size());
  for (VertexId v : branch) order_.emplace_back(tree.distance(x, v), v);
  std::sort(order_.begin(), order_.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
}

double SortedBranch::Evaluate(std::span<const double> weights,
                              double capacity) const {
  double frontier = 0.0;
  double best = 0.0;
  for (size_t i = 0; i < order_.size();) {
    const double d = order_[i].first;
    // Vertices at equal distance share one frontier.
    for (; i < order_.size() && order_[i].first == d; ++i) {
      frontier += weights[order_[i].second];
    }
    // One rounding: exact whenever d * c + W is an integer.
    if (frontier > 0.0) {
      best = std::max(best, (d * capacity + frontier) / capacity);
    }
  }
  return best;
}

std::vector<VertexId> frontier_set(const Tree& tree, const Block& block,
                                   const SinkLocation& x, VertexId pivot) {
  CheckSinkInBlock(tree, block, x);
  if (!block.contains(pivot)) {
    throw InvalidInputError("pivot vertex " + std::to_string(pivot) +
                            " is not in the block");
  }
  const double threshold = tree.distance(x, pivot);
  std::vector<VertexId> out;
  for (VertexId v : block.members()) {
    if (x.is_vertex() && v == x.vertex()) continue;
    if (tree.distance(x, v) >= threshold) out.push_back(v);
  }
  return out;
}

double frontier_weight(const Tree& tree, const Block& block,
                       const SinkLocation& x, VertexId pivot,
                       const Scenario& s) {
  double total = 0.0;
  for (VertexId v : frontier_set(tree, block, x, pivot)) total += s[v];
  return total;
}

double branch_evac_time(const Tree& tree, std::span<const VertexId> branch,
                        const SinkLocation& x, const Scenario& s) {
  return SortedBranch(tree, branch, x).Evaluate(s.weights(), tree.capacity());
}

double evac_time(const Tree& tree, const Block& block, const SinkLocation& x,
                 const Scenario& s) {
  double best = 0.0;
  for (const Block& branch : branches(tree, block, x)) {
    best = std::max(best, branch_evac_time(tree, branch.members(), x, s));
  }
  return best;
}

double evac_time_edgepoint(const Tree& tree, const Block& block,
                           const SinkLocation& x, const Scenario& s) {
  if (x.is_vertex()) {
    throw InvalidInputError("evac_time_edgepoint needs an interior edge point");
  }
  return evac_time(tree, block, x, s);
}

EvacProfile evac_profile(const Tree& tree, const Block& block,
                         const SinkLocation& x, const Scenario& s) {
  EvacProfile profile;
  for (const Block& branch : branches(tree, block, x)) {
    const SortedBranch sorted(tree, branch.members(), x);
    std::vector<FrontierEntry> entries;
    double frontier = 0.0;
    const auto& order = sorted.far_to_near();
    for (size_t i = 0; i < order.size();) {
      const double d = order[i].first;
      size_t j = i;
      for (; j < order.size() && order[j].first == d; ++j) {
        frontier += s[order[j].second];
      }
      for (; i < j; ++i) entries.push_back({order[i].second, d, frontier});
      if (frontier > 0.0) {
        const double c = tree.capacity();
        profile.value = std::max(profile.value, (d * c + frontier) / c);
      }
    }
    std::reverse(entries.begin(), entries.end());
    profile.branches.push_back(std::move(entries));
  }
  return profile;
}

std::vector<double> block_costs(const Tree& tree, const Placement& placement,
                                const Scenario& s) {
  ValidatePlacement(tree, placement);
  std::vector<double> costs;
  for (size_t i = 0; i < placement.sinks.size(); ++i) {
    costs.push_back(evac_time(tree, placement.partition.blocks[i],
                              placement.sinks[i], s));
  }
  return costs;
}

double placement_cost(const Tree& tree, const Placement& placement,
                      const Scenario& s) {
  const auto costs = block_costs(tree, placement, s);
  return costs.empty() ? 0.0 : *std::max_element(costs.begin(), costs.end());
}

}  // namespace evacnet
