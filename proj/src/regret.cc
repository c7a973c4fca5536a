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

#include "evacnet/regret.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

namespace evacnet {
namespace {

constexpr double kTieTolerance = 1e-9;

}  // namespace

ThetaOptCache::ThetaOptCache(const Tree& tree, int k, SinkMode mode,
                             SolverKind solver)
    : tree_(&tree), k_(k), mode_(mode), solver_(solver) {
  if (k < 1 || k > tree.num_vertices()) {
    throw KOutOfRangeError("k must be in [1, n]");
  }
}

double ThetaOptCache::Get(const Scenario& s) const {
  if (auto hit = Peek(s)) return *hit;
  const double value = theta_opt(*tree_, s, k_, mode_, solver_);
  std::unique_lock lock(mutex_);
  return values_.emplace(s, value).first->second;
}

std::optional<double> ThetaOptCache::Peek(const Scenario& s) const {
  std::shared_lock lock(mutex_);
  auto it = values_.find(s);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

size_t ThetaOptCache::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

double theta_opt(const Tree& tree, const Scenario& s, int k, SinkMode mode,
                 SolverKind solver) {
  const EvacuationOracle oracle(tree, s);
  return solve_minmax_partition(oracle, k, mode, solver).value;
}

double regret(const Placement& placement, const Scenario& s,
              const ThetaOptCache& opt) {
  return placement_cost(opt.tree(), placement, s) - opt.Get(s);
}

double regret(const Tree& tree, const Placement& placement, const Scenario& s,
              int k, SinkMode mode) {
  return regret(placement, s, ThetaOptCache(tree, k, mode));
}

RegretReport max_regret(const IntervalProfile& profile,
                        const Placement& placement, const ThetaOptCache& opt) {
  const Tree& tree = opt.tree();
  const ScenarioFamily family =
      scenario_family_placement(tree, profile, placement);
  struct Row {
    const Scenario* scenario;
    std::vector<double> costs;
    double theta;
    double theta_opt;
  };
  std::vector<Row> rows;
  rows.reserve(family.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const FamilyMember& member : family) {
    Row row{&member.scenario, block_costs(tree, placement, member.scenario),
            0.0, opt.Get(member.scenario)};
    row.theta = *std::max_element(row.costs.begin(), row.costs.end());
    best = std::max(best, row.theta - row.theta_opt);
    rows.push_back(std::move(row));
  }
  const Row* worst = nullptr;
  for (const Row& row : rows) {
    if (row.theta - row.theta_opt < best - kTieTolerance) continue;
    if (worst == nullptr || *row.scenario < *worst->scenario) worst = &row;
  }

  RegretReport report;
  report.placement = placement;
  report.worst_scenario = *worst->scenario;
  report.theta_at_worst = worst->theta;
  report.theta_opt_at_worst = worst->theta_opt;
  report.max_regret = std::max(0.0, worst->theta - worst->theta_opt);
  report.worst_block = static_cast<int>(
      std::find(worst->costs.begin(), worst->costs.end(), worst->theta) -
      worst->costs.begin());
  for (size_t i = 0; i < placement.sinks.size(); ++i) {
    report.block_regrets.push_back(local_regret(
        profile, placement.partition.blocks[i], placement.sinks[i], opt));
  }
  return report;
}

RegretReport max_regret(const Tree& tree, const IntervalProfile& profile,
                        const Placement& placement, int k, SinkMode mode) {
  return max_regret(profile, placement, ThetaOptCache(tree, k, mode));
}

double local_regret(const IntervalProfile& profile, const Block& block,
                    const SinkLocation& x, const ThetaOptCache& opt) {
  const Tree& tree = opt.tree();
  double best = -std::numeric_limits<double>::infinity();
  for (const FamilyMember& member :
       scenario_family_block(tree, profile, block, x)) {
    best = std::max(best, evac_time(tree, block, x, member.scenario) -
                              opt.Get(member.scenario));
  }
  return best;
}

double clamped_local_regret(const IntervalProfile& profile, const Block& block,
                            const SinkLocation& x, const ThetaOptCache& opt) {
  return std::max(0.0, local_regret(profile, block, x, opt));
}

size_t LocalRegretOracle::KeyHash::operator()(const Key& key) const {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](uint64_t value) {
    h ^= value;
    h *= 1099511628211ull;
  };
  for (VertexId v : key.branch) mix(static_cast<uint64_t>(v));
  mix(static_cast<uint64_t>(key.sink.edge() + 1));
  mix(static_cast<uint64_t>(key.sink.vertex()));
  mix(std::bit_cast<uint64_t>(key.sink.offset()));
  return static_cast<size_t>(h);
}

LocalRegretOracle::LocalRegretOracle(const Tree& tree, IntervalProfile profile,
                                     std::shared_ptr<const ThetaOptCache> opt)
    : CostOracle(tree), profile_(std::move(profile)), opt_(std::move(opt)) {
  if (profile_.size() != tree.num_vertices()) {
    throw InvalidInputError("interval profile size does not match the tree");
  }
  if (&opt_->tree() != &tree) {
    throw InvalidInputError("optimum cache belongs to another tree");
  }
  opt_floor_ = opt_->Get(profile_.all_lo());
}

double LocalRegretOracle::branch_cost(std::span<const VertexId> branch,
                                      const SinkLocation& x) const {
  Key key{{branch.begin(), branch.end()}, x};
  std::sort(key.branch.begin(), key.branch.end());
  {
    std::lock_guard lock(memo_mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  const double c = tree().capacity();
  const SortedBranch sorted(tree(), branch, x);
  const auto& order = sorted.far_to_near();
  std::vector<double> weights(profile_.size());
  for (VertexId v = 0; v < profile_.size(); ++v) weights[v] = profile_.lo(v);
  double best = sorted.Evaluate(weights, c) - opt_floor_;
  for (size_t i = 0; i < order.size();) {
    const double d = order[i].first;
    for (; i < order.size() && order[i].first == d; ++i) {
      weights[order[i].second] = profile_.hi(order[i].second);
    }
    best = std::max(best,
                    sorted.Evaluate(weights, c) - opt_->Get(Scenario(weights)));
  }
  best = std::max(best, 0.0);
  std::lock_guard lock(memo_mutex_);
  memo_.emplace(std::move(key), best);
  return best;
}

bool LocalRegretOracle::branch_cost_at_most(std::span<const VertexId> branch,
                                            const SinkLocation& x,
                                            double threshold) const {
  const double limit = threshold + kEpsilon;
  if (limit < 0) return false;
  {
    Key key{{branch.begin(), branch.end()}, x};
    std::sort(key.branch.begin(), key.branch.end());
    std::lock_guard lock(memo_mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) {
      return it->second <= limit;
    }
  }
  const double c = tree().capacity();
  const SortedBranch sorted(tree(), branch, x);
  const auto& order = sorted.far_to_near();
  std::vector<double> weights(profile_.size());
  for (VertexId v = 0; v < profile_.size(); ++v) weights[v] = profile_.lo(v);
  if (sorted.Evaluate(weights, c) - opt_floor_ > limit) return false;
  // Scenarios along the branch only grow, so the last exact optimum bounds
  // the next from below. Raising weights that were already positive adds at
  // most the added weight over c to the optimum; raising a zero weight can
  // add more, so the upper bound is dropped until the next exact value.
  double known = opt_floor_;
  double added = 0.0;
  bool bounded = true;
  for (size_t i = 0; i < order.size();) {
    const double d = order[i].first;
    for (; i < order.size() && order[i].first == d; ++i) {
      const VertexId v = order[i].second;
      const double rise = profile_.hi(v) - profile_.lo(v);
      if (rise > 0 && profile_.lo(v) <= 0) bounded = false;
      added += rise;
      weights[v] = profile_.hi(v);
    }
    const double theta = sorted.Evaluate(weights, c);
    if (theta - known <= limit) continue;
    if (bounded && theta - (known + added / c) > limit) return false;
    known = opt_->Get(Scenario(weights));
    added = 0.0;
    bounded = true;
    if (theta - known > limit) return false;
  }
  return true;
}

MinmaxRegretResult solve_minmax_regret(const Tree& tree,
                                       const IntervalProfile& profile, int k,
                                       SinkMode mode,
                                       const MinmaxRegretOptions& options) {
  auto opt = std::make_shared<const ThetaOptCache>(tree, k, mode,
                                                   options.inner_solver);
  const LocalRegretOracle oracle(tree, profile, opt);
  MinmaxRegretResult result;
  result.partition = solve_minmax_partition(oracle, k, mode, options.solver,
                                            options.threshold);
  result.report = max_regret(profile, result.partition.placement, *opt);
  const double a = result.partition.value;
  const double b = result.report.max_regret;
  if (std::abs(a - b) > 1e-6 * std::max(1.0, std::abs(b))) {
    throw EvacError("partition value " + std::to_string(a) +
                    " disagrees with recomputed max-regret " +
                    std::to_string(b));
  }
  return result;
}

}  // namespace evacnet
