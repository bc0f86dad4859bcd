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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tnpath/dense.hpp"

namespace tnpath {

struct TensorNode {
  int id = 0;
  std::vector<Label> indices;
  /// Row-major entries over `indices`; absent for structure-only networks.
  std::optional<std::vector<Complex>> data;

  bool operator==(const TensorNode&) const = default;
};

/// A (hyper)graph of tensors over labeled, dimensioned indices. An index
/// shared by three or more nodes, or by two nodes and the output, is a
/// hyperedge. Values are treated as immutable once built; passes that
/// rewrite a network work on a copy.
struct TensorNetwork {
  std::vector<TensorNode> nodes;
  std::map<Label, std::int64_t> index_dims;
  std::vector<Label> output;
  /// The network value is (contracted value) * 10^norm_exponent.
  double norm_exponent = 0.0;

  bool operator==(const TensorNetwork&) const = default;

  std::int64_t dim(const Label& label) const;
  bool has_data() const;
  /// Dense view of node at position `pos`; throws DataError if it has no data.
  DenseTensor tensor(std::size_t pos) const;
  /// Position of the node with the given id, or -1.
  int position_of(int id) const;
  int next_node_id() const;
  /// Number of nodes carrying each label.
  std::map<Label, int> label_degrees() const;
  /// Labels that are hyperedges (degree >= 3, or >= 2 plus output).
  std::vector<Label> hyperedges() const;
  /// Labels held by at least two nodes (edges and hyperedges alike).
  std::int64_t num_shared_labels() const;
};

/// Parses "ab,bc->ac" style subscripts. Labels are single ASCII letters or
/// bracketed multi-character names such as "[q17_t3]". Nodes get ids 0..n-1
/// and no data.
TensorNetwork parse_einsum_spec(std::string_view subscripts,
                                const std::vector<std::vector<std::int64_t>>& shapes);

/// Splits one term into labels; exposed for reuse by the CLI.
std::vector<Label> parse_einsum_term(std::string_view term);

/// Lists every invariant violation; empty iff the network is well formed.
std::vector<std::string> validate(const TensorNetwork& tn);

/// Throws DataError listing the violations, if any.
void require_valid(const TensorNetwork& tn);

/// Nodes sorted by id; used for equality after round trips.
TensorNetwork canonicalize(TensorNetwork tn);

}  // namespace tnpath
