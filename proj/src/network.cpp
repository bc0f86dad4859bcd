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

#include "tnpath/network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "tnpath/error.hpp"

namespace tnpath {

std::int64_t TensorNetwork::dim(const Label& label) const {
  auto it = index_dims.find(label);
  if (it == index_dims.end()) throw DataError("unknown index " + label);
  return it->second;
}

bool TensorNetwork::has_data() const {
  return std::all_of(nodes.begin(), nodes.end(), [](const auto& n) { return n.data.has_value(); });
}

DenseTensor TensorNetwork::tensor(std::size_t pos) const {
  const TensorNode& n = nodes.at(pos);
  if (!n.data) throw DataError("node " + std::to_string(n.id) + " has no data");
  std::vector<std::int64_t> dims;
  for (const auto& l : n.indices) dims.push_back(dim(l));
  return DenseTensor(n.indices, std::move(dims), *n.data);
}

int TensorNetwork::position_of(int id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

int TensorNetwork::next_node_id() const {
  int m = -1;
  for (const auto& n : nodes) m = std::max(m, n.id);
  return m + 1;
}

std::map<Label, int> TensorNetwork::label_degrees() const {
  std::map<Label, int> deg;
  for (const auto& [l, d] : index_dims) deg[l] = 0;
  for (const auto& n : nodes) {
    for (const auto& l : n.indices) ++deg[l];
  }
  return deg;
}

std::vector<Label> TensorNetwork::hyperedges() const {
  std::set<Label> out(output.begin(), output.end());
  std::vector<Label> h;
  for (const auto& [l, d] : label_degrees()) {
    const int eff = d + (out.count(l) ? 1 : 0);
    if (eff >= 3 && d >= 2) h.push_back(l);
  }
  return h;
}

std::int64_t TensorNetwork::num_shared_labels() const {
  std::int64_t e = 0;
  for (const auto& [l, d] : label_degrees()) {
    if (d >= 2) ++e;
  }
  return e;
}

// ---------------------------------------------------------------------------

std::vector<Label> parse_einsum_term(std::string_view term) {
  std::vector<Label> labels;
  for (std::size_t i = 0; i < term.size(); ++i) {
    const char c = term[i];
    if (c == ' ') continue;
    if (c == '[') {
      const auto close = term.find(']', i + 1);
      if (close == std::string_view::npos || close == i + 1) {
        throw DataError("malformed subscripts: unterminated or empty bracket label");
      }
      labels.emplace_back(term.substr(i + 1, close - i - 1));
      i = close;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      labels.emplace_back(1, c);
    } else {
      throw DataError(std::string("malformed subscripts: unexpected character '") + c + "'");
    }
  }
  return labels;
}

TensorNetwork parse_einsum_spec(std::string_view subscripts,
                                const std::vector<std::vector<std::int64_t>>& shapes) {
  const auto arrow = subscripts.find("->");
  if (arrow == std::string_view::npos) throw DataError("malformed subscripts: missing '->'");
  const std::string_view lhs = subscripts.substr(0, arrow);
  const std::string_view rhs = subscripts.substr(arrow + 2);
  if (rhs.find("->") != std::string_view::npos) throw DataError("malformed subscripts: repeated '->'");

  std::vector<std::string_view> terms;
  std::size_t start = 0;
  while (true) {
    const auto comma = lhs.find(',', start);
    terms.push_back(lhs.substr(start, comma == std::string_view::npos ? lhs.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (terms.size() != shapes.size()) {
    throw DataError("subscripts have " + std::to_string(terms.size()) + " terms but " +
                    std::to_string(shapes.size()) + " shapes were given");
  }

  TensorNetwork tn;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    TensorNode node;
    node.id = static_cast<int>(t);
    node.indices = parse_einsum_term(terms[t]);
    if (node.indices.size() != shapes[t].size()) {
      throw DataError("term " + std::to_string(t) + " has " + std::to_string(node.indices.size()) +
                      " labels but shape has " + std::to_string(shapes[t].size()) + " dims");
    }
    std::set<Label> seen;
    for (std::size_t a = 0; a < node.indices.size(); ++a) {
      const Label& l = node.indices[a];
      if (!seen.insert(l).second) {
        throw DataError("label " + l + " repeated within term " + std::to_string(t));
      }
      const std::int64_t d = shapes[t][a];
      if (d < 1) throw DataError("label " + l + " has non-positive dim");
      auto [it, inserted] = tn.index_dims.emplace(l, d);
      if (!inserted && it->second != d) {
        throw DataError("dimension mismatch: " + l + " has dims " + std::to_string(it->second) +
                        " and " + std::to_string(d));
      }
    }
    tn.nodes.push_back(std::move(node));
  }
  tn.output = parse_einsum_term(rhs);
  std::set<Label> seen;
  for (const auto& l : tn.output) {
    if (!tn.index_dims.count(l)) throw DataError("unknown output label " + l);
    if (!seen.insert(l).second) throw DataError("output label " + l + " repeated");
  }
  return tn;
}

std::vector<std::string> validate(const TensorNetwork& tn) {
  std::vector<std::string> v;
  std::set<int> ids;
  std::set<Label> used;
  for (const auto& [l, d] : tn.index_dims) {
    if (d < 1) v.push_back("non-positive dim " + std::to_string(d) + " for index " + l);
  }
  for (const auto& node : tn.nodes) {
    const std::string where = "@node" + std::to_string(node.id);
    if (!ids.insert(node.id).second) v.push_back("duplicate node id " + std::to_string(node.id));
    std::set<Label> seen;
    std::int64_t expected = 1;
    bool known = true;
    for (const auto& l : node.indices) {
      if (!seen.insert(l).second) v.push_back("repeated index " + l + where);
      auto it = tn.index_dims.find(l);
      if (it == tn.index_dims.end()) {
        v.push_back("unknown index " + l + where);
        known = false;
      } else {
        expected *= it->second;
        used.insert(l);
      }
    }
    if (node.data && known && static_cast<std::int64_t>(node.data->size()) != expected) {
      v.push_back("shape violation" + where + ": data length " + std::to_string(node.data->size()) +
                  " != " + std::to_string(expected));
    }
    if (node.data) {
      for (const auto& z : *node.data) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
          v.push_back("non-finite entry" + where);
          break;
        }
      }
    }
  }
  std::set<Label> out_seen;
  for (const auto& l : tn.output) {
    if (!out_seen.insert(l).second) v.push_back("repeated output index " + l);
    if (!tn.index_dims.count(l)) {
      v.push_back("unknown output index " + l);
    } else if (!used.count(l)) {
      v.push_back("output index " + l + " appears in no node");
    }
  }
  if (!std::isfinite(tn.norm_exponent)) v.push_back("non-finite norm_exponent");
  return v;
}

void require_valid(const TensorNetwork& tn) {
  const auto v = validate(tn);
  if (v.empty()) return;
  std::string msg = "invalid network:";
  for (const auto& s : v) msg += " " + s + ";";
  throw DataError(msg);
}

TensorNetwork canonicalize(TensorNetwork tn) {
  std::stable_sort(tn.nodes.begin(), tn.nodes.end(),
                   [](const auto& a, const auto& b) { return a.id < b.id; });
  return tn;
}

}  // namespace tnpath
