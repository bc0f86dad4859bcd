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

#include "tnpath/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tnpath/error.hpp"

namespace tnpath {

Hypergraph Hypergraph::from_network(const TensorNetwork& tn) {
  Hypergraph hg;
  std::map<Label, int> ids;
  for (const auto& [label, dim] : tn.index_dims) {
    ids[label] = static_cast<int>(hg.edge_label.size());
    hg.edge_label.push_back(label);
    hg.edge_dim.push_back(dim);
    hg.edge_log2.push_back(std::log2(static_cast<double>(dim)));
    hg.edge_is_output.push_back(0);
  }
  hg.edge_nodes.resize(hg.edge_label.size());
  for (const auto& l : tn.output) {
    auto it = ids.find(l);
    if (it == ids.end()) throw DataError("unknown output label " + l);
    hg.edge_is_output[it->second] = 1;
  }
  hg.node_edges.resize(tn.nodes.size());
  for (std::size_t v = 0; v < tn.nodes.size(); ++v) {
    for (const auto& l : tn.nodes[v].indices) {
      auto it = ids.find(l);
      if (it == ids.end()) {
        throw DataError("unknown index " + l + "@node" + std::to_string(tn.nodes[v].id));
      }
      hg.node_edges[v].push_back(it->second);
      hg.edge_nodes[it->second].push_back(static_cast<int>(v));
    }
  }
  return hg;
}

int Hypergraph::edge_id(const Label& label) const {
  auto it = std::lower_bound(edge_label.begin(), edge_label.end(), label);
  if (it == edge_label.end() || *it != label) return -1;
  return static_cast<int>(it - edge_label.begin());
}

bool Hypergraph::has_hyperedges() const {
  for (int e = 0; e < num_edges(); ++e) {
    if (degree(e) + (edge_is_output[e] ? 1 : 0) >= 3 && degree(e) >= 2) return true;
  }
  return false;
}

double Hypergraph::max_leaf_log2() const {
  double m = 0.0;
  for (const auto& edges : node_edges) {
    double s = 0.0;
    for (int e : edges) s += edge_log2[e];
    m = std::max(m, s);
  }
  return m;
}

}  // namespace tnpath
