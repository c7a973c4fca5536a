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

// Interval-uncertain vertex weights and the extreme scenarios that contain a
// worst case for any placement.
//
// For a sink x and a branch B off x, the candidate worst cases are: every
// weight at its lower end, or, for a pivot v in B, the vertices of B at least
// as far from x as v at their upper end and everything else at its lower end.

#ifndef EVACNET_SCENARIOS_H_
#define EVACNET_SCENARIOS_H_

#include <span>
#include <vector>

#include "evacnet/evacuation.h"
#include "evacnet/tree.h"

namespace evacnet {

class IntervalProfile {
 public:
  IntervalProfile() = default;
  // Throws InvalidInputError unless 0 <= lo[v] <= hi[v] for all v.
  IntervalProfile(std::vector<double> lo, std::vector<double> hi);

  int size() const { return static_cast<int>(lo_.size()); }
  double lo(VertexId v) const { return lo_[v]; }
  double hi(VertexId v) const { return hi_[v]; }
  bool is_deterministic() const { return lo_ == hi_; }

  Scenario all_lo() const { return Scenario(lo_); }
  Scenario all_hi() const { return Scenario(hi_); }

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
};

// Where a family member came from. `pivot == -1` marks the all-lo scenario.
struct ScenarioOrigin {
  int block = -1;
  int branch = -1;
  VertexId pivot = -1;
};

struct FamilyMember {
  Scenario scenario;
  ScenarioOrigin origin;
};

using ScenarioFamily = std::vector<FamilyMember>;

// hi on `upper`, lo elsewhere.
Scenario extreme_scenario(const IntervalProfile& profile,
                          std::span<const VertexId> upper);

// All-lo first, then per branch the frontier scenarios from the farthest
// pivot inward. Duplicate weight vectors keep their first occurrence.
ScenarioFamily scenario_family_block(const Tree& tree,
                                     const IntervalProfile& profile,
                                     const Block& block, const SinkLocation& x);

// Family of a single branch hanging off x: all-lo plus one frontier scenario
// per pivot of the branch.
ScenarioFamily scenario_family_branch(const Tree& tree,
                                      const IntervalProfile& profile,
                                      std::span<const VertexId> branch,
                                      const SinkLocation& x);

// Union over blocks, deduplicated in block order.
ScenarioFamily scenario_family_placement(const Tree& tree,
                                         const IntervalProfile& profile,
                                         const Placement& placement);

}  // namespace evacnet

#endif  // EVACNET_SCENARIOS_H_
