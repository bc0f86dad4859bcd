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
#include <vector>

namespace tnpath {

/// Unit-weight vertices, weighted hyperedges given by their pins.
struct PartitionHypergraph {
  int num_nodes = 0;
  std::vector<std::vector<int>> edges;
  std::vector<double> edge_weight;
};

struct Partition {
  int parts = 0;
  std::vector<int> block;
  std::vector<int> block_size;
  double cut_weight = 0.0;
};

/// Largest block allowed: max(floor((1 + eps) * n / k), ceil(n / k)).
int max_block_size(int n, int k, double imbalance);

/// Sum of the weights of edges whose pins lie in more than one block.
double cut_weight(const PartitionHypergraph& h, const std::vector<int>& block);

/// k-way partition with non-empty blocks of size at most max_block_size, by
/// recursive multilevel bisection with FM refinement. Throws
/// InfeasibleError when k < 2 or k > n.
Partition partition_hypergraph(const PartitionHypergraph& h, int k, double imbalance,
                               std::uint64_t seed);

}  // namespace tnpath
