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

// Immutable weighted tree with uniform capacity, sink locations (vertices or
// interior points of edges), blocks, and cut-edge encoded k-partitions.

#ifndef EVACNET_TREE_H_
#define EVACNET_TREE_H_

#include <compare>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace evacnet {

using VertexId = int;
using EdgeId = int;

// Base class of every error raised by the library.
class EvacError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DisconnectedError : public EvacError {
 public:
  using EvacError::EvacError;
};
class CycleError : public EvacError {
 public:
  using EvacError::EvacError;
};
class NonpositiveLengthError : public EvacError {
 public:
  using EvacError::EvacError;
};
class NonpositiveCapacityError : public EvacError {
 public:
  using EvacError::EvacError;
};
// Malformed input: bad vertex ids, self-loops, parallel edges, bad offsets.
class InvalidInputError : public EvacError {
 public:
  using EvacError::EvacError;
};
class SinkOutsideBlockError : public EvacError {
 public:
  using EvacError::EvacError;
};
class EdgeNotInBlockError : public EvacError {
 public:
  using EvacError::EvacError;
};

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double length = 0.0;
};

struct Neighbor {
  VertexId vertex;
  EdgeId edge;
  double length;
};

class Tree;

// A sink: either a vertex or a point strictly inside an edge. Offsets are
// measured from the edge's first-listed endpoint (Edge::u).
class SinkLocation {
 public:
  static SinkLocation AtVertex(VertexId v);
  // Offsets equal to 0 or the edge length collapse to the endpoint vertex.
  static SinkLocation OnEdge(const Tree& tree, EdgeId e, double offset);

  bool is_vertex() const { return edge_ < 0; }
  VertexId vertex() const { return vertex_; }
  EdgeId edge() const { return edge_; }
  double offset() const { return offset_; }

  std::string ToString() const;

  friend bool operator==(const SinkLocation&, const SinkLocation&) = default;
  friend auto operator<=>(const SinkLocation&, const SinkLocation&) = default;

 private:
  SinkLocation(VertexId v, EdgeId e, double offset)
      : edge_(e), vertex_(v), offset_(offset) {}

  // Edge first so vertex sinks (edge_ == -1) order before edge points.
  EdgeId edge_ = -1;
  VertexId vertex_ = -1;
  double offset_ = 0.0;
};

// A set of vertices, kept sorted ascending. Whether the set induces a
// connected subtree is checked by the functions that need it.
class Block {
 public:
  Block() = default;
  explicit Block(std::vector<VertexId> members);

  std::span<const VertexId> members() const { return members_; }
  const std::vector<VertexId>& vector() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  bool contains(VertexId v) const;

  friend bool operator==(const Block&, const Block&) = default;
  friend auto operator<=>(const Block&, const Block&) = default;

 private:
  std::vector<VertexId> members_;
};

class Tree {
 public:
  // Above this size the all-pairs distance table is not built.
  static constexpr int kDistanceCacheLimit = 5000;

  // Validates and builds. Throws CycleError, DisconnectedError,
  // NonpositiveLengthError, NonpositiveCapacityError or InvalidInputError.
  static Tree Build(int n, std::vector<Edge> edges, double capacity);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  double capacity() const { return capacity_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Neighbor> neighbors(VertexId v) const {
    return adjacency_[v];
  }
  std::optional<EdgeId> edge_between(VertexId a, VertexId b) const;

  double distance(VertexId a, VertexId b) const;
  double distance(const SinkLocation& a, VertexId b) const;
  double distance(const SinkLocation& a, const SinkLocation& b) const;

  // Rooted at vertex 0.
  VertexId parent(VertexId v) const { return parent_[v]; }
  // True when `v` lies in the subtree (rooted at 0) of `root`.
  bool in_subtree(VertexId v, VertexId root) const {
    return tin_[root] <= tin_[v] && tout_[v] <= tout_[root];
  }
  // Endpoint of `e` farther from vertex 0.
  VertexId child_endpoint(EdgeId e) const;

  void CheckVertex(VertexId v) const;
  void CheckLocation(const SinkLocation& x) const;

 private:
  Tree() = default;
  double PathLength(VertexId a, VertexId b) const;

  int n_ = 0;
  double capacity_ = 1.0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<VertexId> parent_;
  std::vector<EdgeId> parent_edge_;
  std::vector<int> depth_;
  std::vector<int> tin_;
  std::vector<int> tout_;
  // Row-major n*n, shared between copies. Empty above kDistanceCacheLimit.
  std::shared_ptr<const std::vector<double>> all_pairs_;
};

// The sets of vertices left after removing x from `block`. For a vertex sink
// these are the components of block - {x}, ordered by their neighbour of x.
// For an edge point on (u, v) there are exactly two: the u-side then the
// v-side. Throws SinkOutsideBlockError / EdgeNotInBlockError.
std::vector<Block> branches(const Tree& tree, const Block& block,
                            const SinkLocation& x);

// True if `block` is nonempty and induces a connected subtree.
bool is_connected(const Tree& tree, std::span<const VertexId> vertices);

// Throws unless x is a vertex of `block` or lies on an edge internal to it.
void CheckSinkInBlock(const Tree& tree, const Block& block,
                      const SinkLocation& x);

struct Partition {
  std::vector<EdgeId> cut_edges;  // sorted
  std::vector<Block> blocks;      // ordered by smallest member
  int size() const { return static_cast<int>(blocks.size()); }
};

// Components of the tree after removing `cut_edges`.
Partition partition_from_cuts(const Tree& tree, std::vector<EdgeId> cut_edges);

struct Placement {
  Partition partition;
  std::vector<SinkLocation> sinks;  // sinks[i] serves partition.blocks[i]
};

// Builds a placement from cut edges and sinks given in any order; each sink
// is matched to the block containing it. Throws if the matching is not a
// bijection.
Placement MakePlacement(const Tree& tree, std::vector<EdgeId> cut_edges,
                        std::vector<SinkLocation> sinks);

void ValidatePlacement(const Tree& tree, const Placement& placement);

}  // namespace evacnet

#endif  // EVACNET_TREE_H_
