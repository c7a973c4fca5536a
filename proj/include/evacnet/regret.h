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

// Minmax-regret sink location under interval weights.
//
// The regret of a placement under scenario s is its evacuation time minus
// the optimal k-sink evacuation time for s. Its maximum over the weight box
// is attained on the extreme scenario family of the placement, and the
// per-block maxima (clamped at zero) form a minmax-monotone cost, so the
// partition solvers minimise the max-regret directly.

#ifndef EVACNET_REGRET_H_
#define EVACNET_REGRET_H_

#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "evacnet/evacuation.h"
#include "evacnet/partition.h"
#include "evacnet/scenarios.h"
#include "evacnet/tree.h"

namespace evacnet {

// Memoised optimal k-sink evacuation time per scenario. Safe for concurrent
// use.
class ThetaOptCache {
 public:
  ThetaOptCache(const Tree& tree, int k, SinkMode mode,
                SolverKind solver = SolverKind::kThreshold);

  double Get(const Scenario& s) const;
  // The cached value, if any, without solving.
  std::optional<double> Peek(const Scenario& s) const;

  const Tree& tree() const { return *tree_; }
  int k() const { return k_; }
  SinkMode mode() const { return mode_; }
  SolverKind solver() const { return solver_; }
  size_t size() const;

 private:
  const Tree* tree_;
  int k_;
  SinkMode mode_;
  SolverKind solver_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<Scenario, double, ScenarioHash> values_;
};

struct RegretReport {
  Placement placement;
  double max_regret = 0.0;
  Scenario worst_scenario;
  int worst_block = 0;
  double theta_at_worst = 0.0;
  double theta_opt_at_worst = 0.0;
  // Local regret of each block: the max over its own extreme family.
  std::vector<double> block_regrets;
};

double theta_opt(const Tree& tree, const Scenario& s, int k, SinkMode mode,
                 SolverKind solver = SolverKind::kThreshold);

double regret(const Placement& placement, const Scenario& s,
              const ThetaOptCache& opt);
double regret(const Tree& tree, const Placement& placement, const Scenario& s,
              int k, SinkMode mode);

RegretReport max_regret(const IntervalProfile& profile,
                        const Placement& placement, const ThetaOptCache& opt);
RegretReport max_regret(const Tree& tree, const IntervalProfile& profile,
                        const Placement& placement, int k, SinkMode mode);

// Unclamped local regret: max over the block's extreme family of
// evac_time(block, x, s) - theta_opt(s).
double local_regret(const IntervalProfile& profile, const Block& block,
                    const SinkLocation& x, const ThetaOptCache& opt);
double clamped_local_regret(const IntervalProfile& profile, const Block& block,
                            const SinkLocation& x, const ThetaOptCache& opt);

// Clamped local regret as a partition cost.
class LocalRegretOracle : public CostOracle {
 public:
  LocalRegretOracle(const Tree& tree, IntervalProfile profile,
                    std::shared_ptr<const ThetaOptCache> opt);

  double branch_cost(std::span<const VertexId> branch,
                     const SinkLocation& x) const override;
  bool branch_cost_at_most(std::span<const VertexId> branch,
                           const SinkLocation& x,
                           double threshold) const override;
  bool unit_slope_on_edges() const override { return true; }

  const IntervalProfile& profile() const { return profile_; }
  const ThetaOptCache& opt() const { return *opt_; }

 private:
  struct Key {
    std::vector<VertexId> branch;
    SinkLocation sink;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    size_t operator()(const Key& key) const;
  };

  IntervalProfile profile_;
  std::shared_ptr<const ThetaOptCache> opt_;
  double opt_floor_;
  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<Key, double, KeyHash> memo_;
};

struct MinmaxRegretOptions {
  SolverKind solver = SolverKind::kThreshold;
  // Solver for the inner optimal evacuation times.
  SolverKind inner_solver = SolverKind::kThreshold;
  ThresholdOptions threshold;
};

struct MinmaxRegretResult {
  RegretReport report;
  PartitionSolution partition;
};

// Throws EvacError if the partition value and the recomputed max-regret of
// its placement disagree.
MinmaxRegretResult solve_minmax_regret(const Tree& tree,
                                       const IntervalProfile& profile, int k,
                                       SinkMode mode,
                                       const MinmaxRegretOptions& options = {});

}  // namespace evacnet

#endif  // EVACNET_REGRET_H_
