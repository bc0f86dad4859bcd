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
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "tnpath/network.hpp"
#include "tnpath/rng.hpp"
#include "tnpath/tree.hpp"

namespace tnpath {

enum class Target { kWidth, kCost };

inline constexpr int kDefaultDpCap = 18;

// ---------------------------------------------------------------------------
// Subproblem solvers. Both operate on parentless builder vertices ("items")
// and treat any edge still held outside the items, or in the output, as open.

/// Joins `items` into one vertex, minimizing the target over all trees whose
/// merges either share an index or join whole connected components.
/// Throws UsageError when more than `cap` items are given.
int dp_fill(TreeBuilder& builder, std::span<const int> items, Target target,
            int cap = kDefaultDpCap);

struct GreedyParams {
  /// Weight of the input sizes in size(out) - alpha * (size(a) + size(b)).
  double alpha = 1.0;
  /// Boltzmann temperature, relative to the magnitude of the best candidate
  /// cost; 0 selects the argmin with seeded tie-breaking.
  double tau = 0.0;
};

/// Returns true when merging two items (with the given merged incidence) is
/// allowed. Used by rank simplification to restrict the greedy.
using MergeFilter =
    std::function<bool(const Incidence& a, const Incidence& b, const Incidence& merged)>;

/// Greedy agglomeration of `items`. Without a filter, pairs sharing an index
/// are preferred and all pairs are considered once none remain, so a single
/// root is returned. With a filter, stops when no allowed adjacent pair is
/// left and returns the remaining roots.
std::vector<int> greedy_fill(TreeBuilder& builder, std::span<const int> items,
                             const GreedyParams& params, Rng& rng,
                             const MergeFilter* filter = nullptr);

// ---------------------------------------------------------------------------
// Whole-network drivers.

/// Exhaustive dynamic programming over connected subgraphs.
ContractionTree optimal_dp(const Hypergraph& hg, Target target, int cap = kDefaultDpCap);

ContractionTree greedy_sample(const Hypergraph& hg, const GreedyParams& params,
                              std::uint64_t seed);

/// Undirected multigraph used by the community driver.
struct SimpleGraph {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;
  /// Edge lengths for shortest paths.
  std::vector<double> lengths;
};

/// Edge betweenness g(e) = sum over unordered pairs s<t of
/// sigma_st(e) / sigma_st, with weighted shortest paths. Edges flagged
/// in `removed` are ignored and get 0.
std::vector<double> edge_betweenness(const SimpleGraph& g,
                                     const std::vector<char>* removed = nullptr);

/// Girvan-Newman dendrogram replayed in reverse as contractions. Edge
/// lengths are log2 dims (summed over parallel indices) perturbed by
/// log-normal noise of strength `weight_noise`. Throws UsageError on
/// hyperedges.
ContractionTree girvan_newman_tree(const Hypergraph& hg, double weight_noise, std::uint64_t seed);

struct PartitionParams {
  int parts = 2;
  double imbalance = 0.1;
  int cutoff = 8;
  double weight_noise = 0.0;
};

/// Recursive divisive construction via hypergraph partitioning. Groups of at
/// most `cutoff` leaves are finished by dp_fill (<= 8) or greedy_fill, and
/// the blocks of each level are stitched by dp_fill (<= 8 blocks).
ContractionTree partition_divide(const Hypergraph& hg, const PartitionParams& params,
                                 std::uint64_t seed);

/// Replaces every hyperedge by a tree of degree-3 COPY tensors that follows
/// `hierarchy`, so each tree vertex's bipartition is crossed by one edge.
/// New nodes get fresh ids; the network value is unchanged.
TensorNetwork expand_hyperedges(const TensorNetwork& tn, const ContractionTree& hierarchy);

}  // namespace tnpath
