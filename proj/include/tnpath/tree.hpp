// Copyright 2026 The tnpath Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tnpath/hypergraph.hpp"

namespace tnpath {

/// Rooted binary tree over the nodes of a network. Vertices 0..n-1 are the
/// leaves (network positions); internal vertex n+k is created by the k-th
/// merge, so vertex ids double as SSA ids and are topologically ordered.
class ContractionTree {
 public:
  ContractionTree() = default;
  explicit ContractionTree(int num_leaves);

  int num_leaves() const { return n_; }
  int num_internal() const { return static_cast<int>(children_.size()); }
  int num_vertices() const { return n_ + num_internal(); }
  bool is_leaf(int v) const { return v < n_; }
  int left(int v) const { return children_.at(v - n_).first; }
  int right(int v) const { return children_.at(v - n_).second; }
  int parent(int v) const { return parent_.at(v); }
  /// Children of every internal vertex in creation order.
  const std::vector<std::pair<int, int>>& merges() const { return children_; }

  /// Joins two parentless vertices; returns the new vertex id.
  int merge(int a, int b);
  bool is_complete() const;
  int root() const;
  std::vector<int> leaves_under(int v) const;

  bool operator==(const ContractionTree&) const = default;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> children_;
  std::vector<int> parent_;
};

/// Incidence set of a tree vertex: (edge id, number of leaves below the
/// vertex that hold the edge), sorted by edge id.
using Incidence = std::vector<std::pair<int, int>>;

Incidence leaf_incidence(const Hypergraph& hg, int node);

/// s_v for the parent of two vertices: an edge is kept iff it is held below
/// and is still held elsewhere or is an output index. Reduces to the
/// symmetric difference for plain edges.
Incidence merge_incidence(const Incidence& a, const Incidence& b, const Hypergraph& hg);

double log2_size(const Incidence& s, const Hypergraph& hg);
/// Exact element count (as double) of the tensor with the given incidence.
double size_of(const Incidence& s, const Hypergraph& hg);
/// Edges of s_a union s_b.
std::vector<int> union_edges(const Incidence& a, const Incidence& b);

/// Incidence set of every tree vertex. Throws DataError if the tree's leaf
/// count does not match the network.
std::vector<Incidence> annotate_incidence(const ContractionTree& tree, const Hypergraph& hg);

struct PathMetrics {
  /// Max over internal vertices of sum_{e in s_v} log2 w(e).
  double width = 0.0;
  /// Sum over internal vertices of prod_{e in s_l union s_r} w(e).
  double cost = 0.0;
  /// log10 of the cost, accumulated in log space; 0 when cost is 0.
  double log10_cost = 0.0;
  double flops_real = 0.0;
  double flops_complex = 0.0;
  /// Element count of the largest intermediate (saturates at int64 max).
  std::int64_t peak_memory_elements = 0;
};

PathMetrics metrics(const ContractionTree& tree, const Hypergraph& hg);

/// Incremental tree construction with live incidence tracking; the common
/// substrate of every driver.
class TreeBuilder {
 public:
  explicit TreeBuilder(const Hypergraph& hg);

  const Hypergraph& graph() const { return *hg_; }
  const ContractionTree& tree() const { return tree_; }
  ContractionTree release() { return std::move(tree_); }

  int merge(int a, int b);
  const Incidence& incidence(int v) const { return inc_.at(v); }
  /// Vertices without a parent.
  std::vector<int> roots() const;

 private:
  const Hypergraph* hg_;
  ContractionTree tree_;
  std::vector<Incidence> inc_;
};

// ---------------------------------------------------------------------------
// Path interchange.

/// Pairs of positions in the current node list; both are removed and the
/// result appended to the end.
using LinearPath = std::vector<std::pair<int, int>>;
/// Pairs of SSA ids; the result of step k gets id n + k.
using SsaPath = std::vector<std::pair<int, int>>;

ContractionTree tree_from_linear(const LinearPath& path, int num_leaves);
LinearPath linear_from_tree(const ContractionTree& tree);
ContractionTree tree_from_ssa(const SsaPath& path, int num_leaves);
SsaPath ssa_from_tree(const ContractionTree& tree);

// ---------------------------------------------------------------------------
// Edge elimination orderings.

/// Merges, for each label in turn, every current subtree holding it.
/// Multi-way merges use the exhaustive search up to 8 subtrees and the greedy
/// otherwise; remaining subtrees are joined the same way at the end.
/// Throws UsageError for repeated/unknown labels or a missing non-output index.
ContractionTree tree_from_edge_order(std::span<const Label> order, const Hypergraph& hg);

/// Min-fill elimination order over the line graph (indices adjacent when they
/// share a tensor). Output indices are never eliminated. Ties are broken
/// uniformly at random under `seed`.
std::vector<Label> minfill_order(const Hypergraph& hg, std::uint64_t seed);

}  // namespace tnpath
