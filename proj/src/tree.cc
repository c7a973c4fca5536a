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

#include "evacnet/tree.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

namespace evacnet {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int Find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool Union(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<int> parent_;
};

// Vertices reachable from `start` inside `mask`, never crossing `skip_edge`.
std::vector<VertexId> Component(const Tree& tree, const std::vector<char>& mask,
                                VertexId start, EdgeId skip_edge,
                                VertexId skip_vertex) {
  std::vector<VertexId> out{start};
  std::vector<char> seen(tree.num_vertices(), 0);
  seen[start] = 1;
  for (size_t i = 0; i < out.size(); ++i) {
    for (const Neighbor& nb : tree.neighbors(out[i])) {
      if (nb.edge == skip_edge || nb.vertex == skip_vertex) continue;
      if (!mask[nb.vertex] || seen[nb.vertex]) continue;
      seen[nb.vertex] = 1;
      out.push_back(nb.vertex);
    }
  }
  return out;
}

std::vector<char> MaskOf(const Tree& tree, const Block& block) {
  std::vector<char> mask(tree.num_vertices(), 0);
  for (VertexId v : block.members()) mask[v] = 1;
  return mask;
}

}  // namespace

SinkLocation SinkLocation::AtVertex(VertexId v) { return {v, -1, 0.0}; }

SinkLocation SinkLocation::OnEdge(const Tree& tree, EdgeId e, double offset) {
  if (e < 0 || e >= tree.num_edges()) {
    throw InvalidInputError("edge id " + std::to_string(e) + " out of range");
  }
  const Edge& edge = tree.edge(e);
  if (!(offset >= 0.0 && offset <= edge.length)) {
    std::ostringstream msg;
    msg << "offset " << offset << " outside [0, " << edge.length
        << "] on edge " << e;
    throw InvalidInputError(msg.str());
  }
  if (offset == 0.0) return AtVertex(edge.u);
  if (offset == edge.length) return AtVertex(edge.v);
  return {-1, e, offset};
}

std::string SinkLocation::ToString() const {
  std::ostringstream out;
  if (is_vertex()) {
    out << "v" << vertex_;
  } else {
    out << "e" << edge_ << "@" << offset_;
  }
  return out.str();
}

Block::Block(std::vector<VertexId> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()),
                 members_.end());
}

bool Block::contains(VertexId v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

Tree Tree::Build(int n, std::vector<Edge> edges, double capacity) {
  if (n < 1) throw InvalidInputError("a tree needs at least one vertex");
  if (!(capacity > 0.0) || !std::isfinite(capacity)) {
    throw NonpositiveCapacityError("capacity must be positive and finite");
  }
  std::set<std::pair<VertexId, VertexId>> seen;
  for (size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    const std::string where = "edge " + std::to_string(i);
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw InvalidInputError(where + ": vertex id out of range");
    }
    if (e.u == e.v) throw InvalidInputError(where + ": self-loop");
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      throw NonpositiveLengthError(where + ": length must be positive");
    }
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) {
      throw InvalidInputError(where + ": parallel edge");
    }
  }
  DisjointSets sets(n);
  for (size_t i = 0; i < edges.size(); ++i) {
    if (!sets.Union(edges[i].u, edges[i].v)) {
      throw CycleError("edge " + std::to_string(i) + " closes a cycle");
    }
  }
  if (static_cast<int>(edges.size()) != n - 1) {
    throw DisconnectedError("tree with " + std::to_string(n) +
                            " vertices needs " + std::to_string(n - 1) +
                            " edges, got " + std::to_string(edges.size()));
  }

  Tree tree;
  tree.n_ = n;
  tree.capacity_ = capacity;
  tree.edges_ = std::move(edges);
  tree.adjacency_.assign(n, {});
  for (EdgeId e = 0; e < tree.num_edges(); ++e) {
    const Edge& edge = tree.edges_[e];
    tree.adjacency_[edge.u].push_back({edge.v, e, edge.length});
    tree.adjacency_[edge.v].push_back({edge.u, e, edge.length});
  }
  for (auto& list : tree.adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) {
                return a.vertex < b.vertex;
              });
  }

  // Root at 0: parents, depths and an Euler numbering for subtree tests.
  tree.parent_.assign(n, -1);
  tree.parent_edge_.assign(n, -1);
  tree.depth_.assign(n, 0);
  tree.tin_.assign(n, 0);
  tree.tout_.assign(n, 0);
  int clock = 0;
  std::vector<std::pair<VertexId, size_t>> stack{{0, 0}};
  tree.tin_[0] = clock++;
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next < tree.adjacency_[v].size()) {
      const Neighbor nb = tree.adjacency_[v][next++];
      if (nb.vertex == tree.parent_[v]) continue;
      tree.parent_[nb.vertex] = v;
      tree.parent_edge_[nb.vertex] = nb.edge;
      tree.depth_[nb.vertex] = tree.depth_[v] + 1;
      tree.tin_[nb.vertex] = clock++;
      stack.emplace_back(nb.vertex, 0);
    } else {
      tree.tout_[v] = clock++;
      stack.pop_back();
    }
  }

  if (n <= kDistanceCacheLimit) {
    auto table = std::make_shared<std::vector<double>>(
        static_cast<size_t>(n) * n, 0.0);
    std::vector<VertexId> order;
    std::vector<VertexId> from(n);
    for (VertexId s = 0; s < n; ++s) {
      double* row = table->data() + static_cast<size_t>(s) * n;
      order.assign(1, s);
      from[s] = -1;
      for (size_t i = 0; i < order.size(); ++i) {
        const VertexId v = order[i];
        for (const Neighbor& nb : tree.adjacency_[v]) {
          if (nb.vertex == from[v]) continue;
          from[nb.vertex] = v;
          row[nb.vertex] = row[v] + nb.length;
          order.push_back(nb.vertex);
        }
      }
    }
    // Mirror the upper triangle so the table is exactly symmetric.
    for (VertexId a = 0; a < n; ++a) {
      for (VertexId b = a + 1; b < n; ++b) {
        (*table)[static_cast<size_t>(b) * n + a] =
            (*table)[static_cast<size_t>(a) * n + b];
      }
    }
    tree.all_pairs_ = std::move(table);
  }
  return tree;
}

std::optional<EdgeId> Tree::edge_between(VertexId a, VertexId b) const {
  CheckVertex(a);
  CheckVertex(b);
  for (const Neighbor& nb : adjacency_[a]) {
    if (nb.vertex == b) return nb.edge;
  }
  return std::nullopt;
}

void Tree::CheckVertex(VertexId v) const {
  if (v < 0 || v >= n_) {
    throw InvalidInputError("vertex id " + std::to_string(v) +
                            " out of range");
  }
}

void Tree::CheckLocation(const SinkLocation& x) const {
  if (x.is_vertex()) {
    CheckVertex(x.vertex());
    return;
  }
  if (x.edge() < 0 || x.edge() >= num_edges()) {
    throw InvalidInputError("edge id " + std::to_string(x.edge()) +
                            " out of range");
  }
  if (!(x.offset() > 0.0 && x.offset() < edges_[x.edge()].length)) {
    throw InvalidInputError("edge point offset must be strictly interior");
  }
}

VertexId Tree::child_endpoint(EdgeId e) const {
  const Edge& edge = edges_.at(e);
  return parent_[edge.u] == edge.v && parent_edge_[edge.u] == e ? edge.u
                                                                 : edge.v;
}

double Tree::PathLength(VertexId a, VertexId b) const {
  double from_a = 0.0;
  double from_b = 0.0;
  while (depth_[a] > depth_[b]) {
    from_a += edges_[parent_edge_[a]].length;
    a = parent_[a];
  }
  while (depth_[b] > depth_[a]) {
    from_b += edges_[parent_edge_[b]].length;
    b = parent_[b];
  }
  while (a != b) {
    from_a += edges_[parent_edge_[a]].length;
    from_b += edges_[parent_edge_[b]].length;
    a = parent_[a];
    b = parent_[b];
  }
  return from_a + from_b;
}

double Tree::distance(VertexId a, VertexId b) const {
  if (all_pairs_) return (*all_pairs_)[static_cast<size_t>(a) * n_ + b];
  return a < b ? PathLength(a, b) : PathLength(b, a);
}

double Tree::distance(const SinkLocation& a, VertexId b) const {
  if (a.is_vertex()) return distance(a.vertex(), b);
  const Edge& e = edges_[a.edge()];
  const VertexId child = child_endpoint(a.edge());
  const VertexId other = child == e.u ? e.v : e.u;
  const double to_u = a.offset();
  const double to_v = e.length - a.offset();
  const VertexId near = in_subtree(b, child) ? child : other;
  return (near == e.u ? to_u : to_v) + distance(near, b);
}

double Tree::distance(const SinkLocation& a, const SinkLocation& b) const {
  if (b.is_vertex()) return distance(a, b.vertex());
  if (a.is_vertex()) return distance(b, a.vertex());
  if (a.edge() == b.edge()) return std::abs(a.offset() - b.offset());
  const Edge& e = edges_[b.edge()];
  return std::min(b.offset() + distance(a, e.u),
                  e.length - b.offset() + distance(a, e.v));
}

bool is_connected(const Tree& tree, std::span<const VertexId> vertices) {
  if (vertices.empty()) return false;
  std::vector<char> mask(tree.num_vertices(), 0);
  for (VertexId v : vertices) {
    tree.CheckVertex(v);
    mask[v] = 1;
  }
  const auto reached = Component(tree, mask, vertices.front(), -1, -1);
  const auto distinct = std::count(mask.begin(), mask.end(), 1);
  return static_cast<long>(reached.size()) == distinct;
}

void CheckSinkInBlock(const Tree& tree, const Block& block,
                      const SinkLocation& x) {
  tree.CheckLocation(x);
  if (x.is_vertex()) {
    if (!block.contains(x.vertex())) {
      throw SinkOutsideBlockError("sink " + x.ToString() +
                                  " is not in the block");
    }
    return;
  }
  const Edge& e = tree.edge(x.edge());
  if (!block.contains(e.u) || !block.contains(e.v)) {
    throw EdgeNotInBlockError("edge " + std::to_string(x.edge()) +
                              " is not internal to the block");
  }
}

std::vector<Block> branches(const Tree& tree, const Block& block,
                            const SinkLocation& x) {
  CheckSinkInBlock(tree, block, x);
  const auto mask = MaskOf(tree, block);
  std::vector<Block> out;
  if (x.is_vertex()) {
    for (const Neighbor& nb : tree.neighbors(x.vertex())) {
      if (!mask[nb.vertex]) continue;
      out.emplace_back(Component(tree, mask, nb.vertex, -1, x.vertex()));
    }
    return out;
  }
  const Edge& e = tree.edge(x.edge());
  out.emplace_back(Component(tree, mask, e.u, x.edge(), -1));
  out.emplace_back(Component(tree, mask, e.v, x.edge(), -1));
  return out;
}

Partition partition_from_cuts(const Tree& tree,
                              std::vector<EdgeId> cut_edges) {
  std::sort(cut_edges.begin(), cut_edges.end());
  cut_edges.erase(std::unique(cut_edges.begin(), cut_edges.end()),
                  cut_edges.end());
  std::vector<char> cut(tree.num_edges(), 0);
  for (EdgeId e : cut_edges) {
    if (e < 0 || e >= tree.num_edges()) {
      throw InvalidInputError("cut edge id " + std::to_string(e) +
                              " out of range");
    }
    cut[e] = 1;
  }
  Partition partition;
  partition.cut_edges = std::move(cut_edges);
  std::vector<char> seen(tree.num_vertices(), 0);
  for (VertexId start = 0; start < tree.num_vertices(); ++start) {
    if (seen[start]) continue;
    std::vector<VertexId> members{start};
    seen[start] = 1;
    for (size_t i = 0; i < members.size(); ++i) {
      for (const Neighbor& nb : tree.neighbors(members[i])) {
        if (cut[nb.edge] || seen[nb.vertex]) continue;
        seen[nb.vertex] = 1;
        members.push_back(nb.vertex);
      }
    }
    partition.blocks.emplace_back(std::move(members));
  }
  return partition;
}

Placement MakePlacement(const Tree& tree, std::vector<EdgeId> cut_edges,
                        std::vector<SinkLocation> sinks) {
  Placement placement;
  placement.partition = partition_from_cuts(tree, std::move(cut_edges));
  const int k = placement.partition.size();
  if (static_cast<int>(sinks.size()) != k) {
    throw InvalidInputError("partition has " + std::to_string(k) +
                            " blocks but " + std::to_string(sinks.size()) +
                            " sinks were given");
  }
  std::vector<int> block_of(tree.num_vertices(), -1);
  for (int i = 0; i < k; ++i) {
    for (VertexId v : placement.partition.blocks[i].members()) block_of[v] = i;
  }
  placement.sinks.assign(k, SinkLocation::AtVertex(-1));
  std::vector<char> used(k, 0);
  for (const SinkLocation& x : sinks) {
    tree.CheckLocation(x);
    int i = -1;
    if (x.is_vertex()) {
      i = block_of[x.vertex()];
    } else {
      const Edge& e = tree.edge(x.edge());
      if (block_of[e.u] != block_of[e.v]) {
        throw EdgeNotInBlockError("sink " + x.ToString() +
                                  " lies on a cut edge");
      }
      i = block_of[e.u];
    }
    if (used[i]) {
      throw InvalidInputError("two sinks in block " + std::to_string(i));
    }
    used[i] = 1;
    placement.sinks[i] = x;
  }
  return placement;
}

void ValidatePlacement(const Tree& tree, const Placement& placement) {
  const auto& blocks = placement.partition.blocks;
  if (blocks.size() != placement.sinks.size()) {
    throw InvalidInputError("one sink per block is required");
  }
  std::vector<int> count(tree.num_vertices(), 0);
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (!is_connected(tree, blocks[i].members())) {
      throw InvalidInputError("block " + std::to_string(i) +
                              " is not connected");
    }
    for (VertexId v : blocks[i].members()) ++count[v];
    CheckSinkInBlock(tree, blocks[i], placement.sinks[i]);
  }
  for (int c : count) {
    if (c != 1) throw InvalidInputError("blocks must partition the vertices");
  }
}

}  // namespace evacnet
