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
#include <string>
#include <vector>

#include "tnpath/network.hpp"

namespace tnpath {

/// Integer view of a network's structure. Node i is tn.nodes[i]; edge ids
/// follow the sorted order of index labels.
struct Hypergraph {
  std::vector<std::vector<int>> node_edges;
  std::vector<std::vector<int>> edge_nodes;
  std::vector<std::int64_t> edge_dim;
  std::vector<double> edge_log2;
  std::vector<Label> edge_label;
  std::vector<char> edge_is_output;

  static Hypergraph from_network(const TensorNetwork& tn);

  int num_nodes() const { return static_cast<int>(node_edges.size()); }
  int num_edges() const { return static_cast<int>(edge_dim.size()); }
  /// Edge id of `label`, or -1.
  int edge_id(const Label& label) const;
  /// Number of nodes holding the edge.
  int degree(int e) const { return static_cast<int>(edge_nodes[e].size()); }
  bool has_hyperedges() const;
  /// log2 of the largest leaf tensor.
  double max_leaf_log2() const;
};

}  // namespace tnpath
