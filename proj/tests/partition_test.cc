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


#include <gtest/gtest.h>

#include "evacnet/oracles.h"
#include "evacnet/partition.h"
#include "test_util.h"

namespace evacnet {
namespace {

using testing::PathTree;
using testing::RandomInt;
using testing::RelClose;
using testing::WholeTree;

class VertexOnlyOracle : public EvacuationOracle {
 public:
  using EvacuationOracle::EvacuationOracle;
  bool supports_continuous() const override { return false; }
};

TEST(BestVertexSink, Singleton) {
  Tree tree = PathTree({1, 2});
  EvacuationOracle oracle(tree, Scenario({3, 1, 0}));
  SinkChoice c = best_vertex_sink(Block({1}), oracle);
  EXPECT_EQ(c.sink, SinkLocation::AtVertex(1));
  EXPECT_DOUBLE_EQ(c.value, 0);
}

TEST(BestVertexSink, PathAbxMatchesScan) {
  Tree tree = PathTree({1, 2});
  Scenario s({3, 1, 0});
  EvacuationOracle oracle(tree, s);
  SinkChoice c = best_vertex_sink(WholeTree(tree), oracle);
  double best = 1e18;
  for (VertexId v = 0; v < 3; ++v) {
    best = std::min(best, simulate_evacuation(tree, WholeTree(tree), v, s));
  }
  EXPECT_DOUBLE_EQ(c.value, best);
  EXPECT_EQ(c.sink, SinkLocation::AtVertex(0));
  EXPECT_DOUBLE_EQ(c.value, 2);
}

TEST(BestVertexSink, TwoVertices) {
  Tree tree = Tree::Build(2, {{0, 1, 3}}, 1);
  EvacuationOracle oracle(tree, Scenario({2, 4}));
  EXPECT_DOUBLE_EQ(oracle.cost(WholeTree(tree), SinkLocation::AtVertex(0)), 7);
  SinkChoice c = best_vertex_sink(WholeTree(tree), oracle);
  EXPECT_EQ(c.sink, SinkLocation::AtVertex(1));
  EXPECT_DOUBLE_EQ(c.value, 5);
}

TEST(BestEdgeSink, Balanced) {
  Tree tree = Tree::Build(2, {{0, 1, 3}}, 1);
  EvacuationOracle oracle(tree, Scenario({2, 4}));
  EdgeSinkSolution e = best_edge_sink(Block({0}), Block({1}), 0, oracle);
  EXPECT_DOUBLE_EQ(e.value, 4.5);
  EXPECT_EQ(e.point, SinkLocation::OnEdge(tree, 0, 2.5));
  EXPECT_NEAR(grid_edge_minimum(oracle, WholeTree(tree), 0), 4.5, 1e-3);
}

TEST(BestEdgeSink, EmptySideCollapsesToFarEndpoint) {
  Tree tree = Tree::Build(2, {{0, 1, 3}}, 1);
  EvacuationOracle oracle(tree, Scenario({0, 4}));
  EdgeSinkSolution e = best_edge_sink(Block({0}), Block({1}), 0, oracle);
  EXPECT_DOUBLE_EQ(e.value, 0);
  EXPECT_EQ(e.point, SinkLocation::AtVertex(1));
}

TEST(BestEdgeSink, SymmetricGivesMidpoint) {
  Tree tree = PathTree({1, 4, 1});
  EvacuationOracle oracle(tree, Scenario({3, 1, 1, 3}));
  EdgeSinkSolution e = best_edge_sink(Block({0, 1}), Block({2, 3}), 1, oracle);
  EXPECT_EQ(e.point, SinkLocation::OnEdge(tree, 1, 2.0));
  EXPECT_DOUBLE_EQ(e.value, oracle.cost(WholeTree(tree), e.point));
}

TEST(BestEdgeSink, RejectsVertexOnlyOracle) {
  Tree tree = Tree::Build(2, {{0, 1, 3}}, 1);
  VertexOnlyOracle oracle(tree, Scenario({2, 4}));
  EXPECT_THROW(best_edge_sink(Block({0}), Block({1}), 0, oracle),
               OracleNotContinuousError);
  EXPECT_THROW(solve_minmax_partition(oracle, 1, SinkMode::kContinuous,
                                      SolverKind::kExact),
               OracleNotContinuousError);
}

TEST(Feasible, Examples) {
  Tree tree = testing::ThreePath();
  EvacuationOracle oracle(tree, Scenario({2, 0, 2}));
  EXPECT_TRUE(feasible(oracle, 1, 3, SinkMode::kDiscrete).feasible);
  EXPECT_FALSE(feasible(oracle, 1, 2.5, SinkMode::kDiscrete).feasible);
  Feasibility two = feasible(oracle, 2, 0, SinkMode::kDiscrete);
  ASSERT_TRUE(two.feasible);
  ASSERT_TRUE(two.witness.has_value());
  EXPECT_EQ(two.witness->partition.size(), 2);
  EXPECT_DOUBLE_EQ(placement_cost(tree, *two.witness, Scenario({2, 0, 2})), 0);

  Tree path4 = PathTree({1, 1, 1});
  EvacuationOracle positive(path4, Scenario({1, 2, 3, 4}));
  for (int k = 1; k < 4; ++k) {
    EXPECT_FALSE(feasible(positive, k, 0, SinkMode::kContinuous).feasible);
  }
  EXPECT_TRUE(feasible(positive, 4, 0, SinkMode::kContinuous).feasible);
}

TEST(Solve, Examples) {
  Tree tree = testing::ThreePath();
  EvacuationOracle oracle(tree, Scenario({2, 0, 2}));
  for (SolverKind solver : {SolverKind::kExact, SolverKind::kThreshold}) {
    PartitionSolution all = solve_minmax_partition(oracle, 3,
                                                   SinkMode::kDiscrete, solver);
    EXPECT_DOUBLE_EQ(all.value, 0);
    EXPECT_EQ(all.placement.partition.size(), 3);

    PartitionSolution one = solve_minmax_partition(oracle, 1,
                                                   SinkMode::kDiscrete, solver);
    EXPECT_DOUBLE_EQ(one.value, 3);
    EXPECT_EQ(one.placement.sinks[0], SinkLocation::AtVertex(1));

    PartitionSolution cont = solve_minmax_partition(
        oracle, 1, SinkMode::kContinuous, solver);
    EXPECT_DOUBLE_EQ(cont.value, 3);
  }
  EXPECT_THROW(solve_minmax_partition(oracle, 0, SinkMode::kDiscrete,
                                      SolverKind::kExact),
               KOutOfRangeError);
  EXPECT_THROW(solve_minmax_partition(oracle, 4, SinkMode::kDiscrete,
                                      SolverKind::kThreshold),
               KOutOfRangeError);
}

TEST(Solve, TwoVertexContinuous) {
  Tree tree = Tree::Build(2, {{0, 1, 3}}, 1);
  EvacuationOracle oracle(tree, Scenario({2, 4}));
  for (SolverKind solver : {SolverKind::kExact, SolverKind::kThreshold}) {
    PartitionSolution s = solve_minmax_partition(oracle, 1,
                                                 SinkMode::kContinuous, solver);
    EXPECT_DOUBLE_EQ(s.value, 4.5);
    EXPECT_EQ(s.placement.sinks[0], SinkLocation::OnEdge(tree, 0, 2.5));
  }
}

TEST(Combinations, CountsAndOrder) {
  EXPECT_EQ(CountCombinations(5, 2), 10);
  EXPECT_EQ(CountCombinations(5, 0), 1);
  EXPECT_EQ(CountCombinations(3, 4), 0);
  std::vector<std::vector<int>> seen;
  ForEachCombination(4, 2, [&](const std::vector<int>& c) {
    seen.push_back(c);
    return true;
  });
  ASSERT_EQ(seen.size(), 6u);
  EXPECT_EQ(seen.front(), (std::vector<int>{0, 1}));
  EXPECT_EQ(seen.back(), (std::vector<int>{2, 3}));
}

// Solvers against the enumerator, plus the ordering invariants between
// modes and values of k.
TEST(SolveProperty, AgreesWithBruteForce) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 80; ++trial) {
    int n = RandomInt(rng, 1, 9);
    RandomInstanceOptions options;
    options.capacity = RandomInt(rng, 1, 3);
    RandomInstance r = random_instance(rng, n, options);
    EvacuationOracle oracle(r.tree, random_scenario(rng, r.profile));
    double previous[2] = {1e18, 1e18};
    for (int k = 1; k <= std::min(3, n); ++k) {
      double by_mode[2];
      for (SinkMode mode : {SinkMode::kDiscrete, SinkMode::kContinuous}) {
        PartitionSolution brute = brute_solve_partition(oracle, k, mode);
        PartitionSolution exact = solve_minmax_partition(oracle, k, mode,
                                                         SolverKind::kExact);
        PartitionSolution thresh = solve_minmax_partition(
            oracle, k, mode, SolverKind::kThreshold);
        EXPECT_TRUE(RelClose(exact.value, brute.value, 1e-6))
            << exact.value << " vs " << brute.value;
        EXPECT_TRUE(RelClose(thresh.value, brute.value, 1e-6))
            << thresh.value << " vs " << brute.value;
        for (const PartitionSolution* s : {&exact, &thresh}) {
          ValidatePlacement(r.tree, s->placement);
          EXPECT_EQ(s->placement.partition.size(), k);
          EXPECT_NEAR(placement_cost(r.tree, s->placement, oracle.scenario()),
                      s->value, 1e-9);
        }
        int m = mode == SinkMode::kDiscrete ? 0 : 1;
        by_mode[m] = thresh.value;
        EXPECT_LE(thresh.value, previous[m] + 1e-9);
        previous[m] = thresh.value;
      }
      EXPECT_LE(by_mode[1], by_mode[0] + 1e-9);
    }
  }
}

TEST(SolveProperty, WeightedCenterAgreesWithBruteForce) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    int n = RandomInt(rng, 1, 8);
    RandomInstance r = random_instance(rng, n);
    WeightedCenterOracle oracle(r.tree, random_scenario(rng, r.profile));
    for (int k = 1; k <= std::min(3, n); ++k) {
      for (SinkMode mode : {SinkMode::kDiscrete, SinkMode::kContinuous}) {
        double brute = brute_solve_partition(oracle, k, mode).value;
        double thresh = solve_minmax_partition(oracle, k, mode,
                                               SolverKind::kThreshold)
                            .value;
        double exact =
            solve_minmax_partition(oracle, k, mode, SolverKind::kExact).value;
        EXPECT_TRUE(RelClose(thresh, brute, 1e-6)) << thresh << " " << brute;
        EXPECT_TRUE(RelClose(exact, brute, 1e-6)) << exact << " " << brute;
      }
    }
  }
}

TEST(SolveProperty, FeasibilityIsMonotoneInThreshold) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    int n = RandomInt(rng, 2, 10);
    RandomInstance r = random_instance(rng, n);
    EvacuationOracle oracle(r.tree, random_scenario(rng, r.profile));
    int k = RandomInt(rng, 1, std::min(3, n));
    SinkMode mode = trial % 2 ? SinkMode::kContinuous : SinkMode::kDiscrete;
    double hi = oracle.cost(WholeTree(r.tree), SinkLocation::AtVertex(0));
    bool was_feasible = false;
    for (int i = 0; i <= 40; ++i) {
      bool now = feasible(oracle, k, hi * i / 40, mode).feasible;
      if (was_feasible) EXPECT_TRUE(now);
      was_feasible = now;
    }
    EXPECT_TRUE(was_feasible);
  }
}

TEST(SolveProperty, EdgeSinkBeatsEndpointsAndGrid) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 60; ++trial) {
    int n = RandomInt(rng, 2, 10);
    RandomInstance r = random_instance(rng, n);
    EvacuationOracle oracle(r.tree, random_scenario(rng, r.profile));
    EdgeId e = RandomInt(rng, 0, n - 2);
    const Edge& edge = r.tree.edge(e);
    std::vector<VertexId> first, second;
    for (VertexId v = 0; v < n; ++v) {
      (r.tree.distance(v, edge.u) < r.tree.distance(v, edge.v) ? first : second)
          .push_back(v);
    }
    EdgeSinkSolution sol =
        best_edge_sink(Block(first), Block(second), e, oracle);
    Block all = WholeTree(r.tree);
    EXPECT_LE(sol.value, oracle.cost(all, SinkLocation::AtVertex(edge.u)) + 1e-9);
    EXPECT_LE(sol.value, oracle.cost(all, SinkLocation::AtVertex(edge.v)) + 1e-9);
    // Side costs have slope at most 1, so a grid of m interior points
    // overshoots the true minimum by at most length / m.
    double grid = grid_edge_minimum(oracle, all, e);
    EXPECT_LE(sol.value, grid + 1e-9);
    double endpoints =
        std::min(oracle.cost(all, SinkLocation::AtVertex(edge.u)),
                 oracle.cost(all, SinkLocation::AtVertex(edge.v)));
    EXPECT_GE(sol.value, std::min(grid - edge.length / 10000, endpoints) - 1e-9);
    EXPECT_NEAR(oracle.cost(all, sol.point), sol.value, 1e-9);
  }
}

TEST(SolveProperty, Deterministic) {
  std::mt19937_64 rng(45);
  RandomInstance r = random_instance(rng, 30);
  EvacuationOracle oracle(r.tree, random_scenario(rng, r.profile));
  PartitionSolution a = solve_minmax_partition(oracle, 4, SinkMode::kContinuous,
                                               SolverKind::kThreshold);
  PartitionSolution b = solve_minmax_partition(oracle, 4, SinkMode::kContinuous,
                                               SolverKind::kThreshold);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.placement.partition.cut_edges, b.placement.partition.cut_edges);
  EXPECT_EQ(a.placement.sinks, b.placement.sinks);
}

}  // namespace
}  // namespace evacnet
