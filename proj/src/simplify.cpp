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

#include "tnpath/simplify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_set>

#include "tnpath/drivers.hpp"
#include "tnpath/error.hpp"
#include "tnpath/executor.hpp"

namespace tnpath {

namespace {

std::vector<std::size_t> by_id(const TensorNetwork& tn) {
  std::vector<std::size_t> pos(tn.nodes.size());
  std::iota(pos.begin(), pos.end(), 0);
  std::sort(pos.begin(), pos.end(),
            [&](std::size_t a, std::size_t b) { return tn.nodes[a].id < tn.nodes[b].id; });
  return pos;
}

bool is_output(const TensorNetwork& tn, const Label& l) {
  return std::find(tn.output.begin(), tn.output.end(), l) != tn.output.end();
}

bool carries(const TensorNode& n, const Label& l) {
  return std::find(n.indices.begin(), n.indices.end(), l) != n.indices.end();
}

// True if some frozen node carries `l`.
bool frozen_label(const TensorNetwork& tn, const Label& l, const SimplifyOptions& o) {
  if (o.frozen.empty()) return false;
  for (const auto& n : tn.nodes) {
    if (o.frozen.count(n.id) && carries(n, l)) return true;
  }
  return false;
}

bool eligible(const TensorNode& n, const SimplifyOptions& o) {
  return n.data.has_value() && !o.frozen.count(n.id);
}

void store(TensorNode& n, DenseTensor t) {
  n.indices = std::move(t.labels);
  n.data = std::move(t.data);
}

void drop_unused_labels(TensorNetwork& tn) {
  std::unordered_set<Label> used(tn.output.begin(), tn.output.end());
  for (const auto& n : tn.nodes) used.insert(n.indices.begin(), n.indices.end());
  std::erase_if(tn.index_dims, [&](const auto& kv) { return !used.count(kv.first); });
}

Label fresh_bond(const TensorNetwork& tn, int& counter) {
  Label l;
  do {
    l = "_b" + std::to_string(counter++);
  } while (tn.index_dims.count(l));
  return l;
}

}  // namespace

int antidiagonal_gauge(TensorNetwork& tn, const SimplifyOptions& o) {
  int count = 0;
  std::unordered_set<Label> flipped;
  for (std::size_t pos : by_id(tn)) {
    if (!eligible(tn.nodes[pos], o)) continue;
    bool again = true;
    while (again) {
      again = false;
      const DenseTensor t = tn.tensor(pos);
      if (!(t.max_abs() > 0.0)) break;
      for (int x = 0; x < t.rank() && !again; ++x) {
        for (int y = x + 1; y < t.rank() && !again; ++y) {
          if (t.dims[x] != t.dims[y] || t.dims[x] < 2) continue;
          if (zero_pattern(t, PatternKind::kDiagonal, x, y, o.rel_tol)) continue;
          if (!zero_pattern(t, PatternKind::kAntidiagonal, x, y, o.rel_tol)) continue;
          std::optional<Label> pick;
          for (const Label& l : {t.labels[y], t.labels[x]}) {
            if (!is_output(tn, l) && !flipped.count(l) && !frozen_label(tn, l, o)) {
              pick = l;
              break;
            }
          }
          if (!pick) continue;
          for (std::size_t p = 0; p < tn.nodes.size(); ++p) {
            if (!carries(tn.nodes[p], *pick)) continue;
            if (tn.nodes[p].data) store(tn.nodes[p], flip_index(tn.tensor(p), *pick));
          }
          flipped.insert(*pick);
          ++count;
          again = true;
        }
      }
    }
  }
  return count;
}

int diagonal_reduce(TensorNetwork& tn, const SimplifyOptions& o) {
  int count = 0;
  for (std::size_t pos : by_id(tn)) {
    if (!eligible(tn.nodes[pos], o)) continue;
    bool again = true;
    while (again) {
      again = false;
      const DenseTensor t = tn.tensor(pos);
      for (int x = 0; x < t.rank() && !again; ++x) {
        for (int y = x + 1; y < t.rank() && !again; ++y) {
          if (t.dims[x] != t.dims[y] || t.dims[x] < 2) continue;
          if (!zero_pattern(t, PatternKind::kDiagonal, x, y, o.rel_tol)) continue;
          const Label& lx = t.labels[x];
          const Label& ly = t.labels[y];
          const bool ox = is_output(tn, lx), oy = is_output(tn, ly);
          if (ox && oy) continue;
          const Label keep = oy ? ly : lx;
          const Label drop = oy ? lx : ly;
          if (frozen_label(tn, drop, o)) continue;
          for (std::size_t p = 0; p < tn.nodes.size(); ++p) {
            TensorNode& n = tn.nodes[p];
            if (!carries(n, drop)) continue;
            if (carries(n, keep)) {
              if (n.data) {
                store(n, take_diagonal(tn.tensor(p), keep, drop));
              } else {
                std::erase(n.indices, drop);
              }
            } else {
              std::replace(n.indices.begin(), n.indices.end(), drop, keep);
            }
          }
          tn.index_dims.erase(drop);
          ++count;
          again = true;
        }
      }
    }
  }
  return count;
}

int column_reduce(TensorNetwork& tn, const SimplifyOptions& o) {
  int count = 0;
  for (std::size_t pos : by_id(tn)) {
    if (!eligible(tn.nodes[pos], o)) continue;
    bool again = true;
    while (again) {
      again = false;
      const DenseTensor t = tn.tensor(pos);
      for (int x = 0; x < t.rank(); ++x) {
        const Label& l = t.labels[x];
        if (is_output(tn, l) || frozen_label(tn, l, o)) continue;
        const auto m = zero_pattern(t, PatternKind::kColumn, x, -1, o.rel_tol);
        if (!m) continue;
        tn = fix_labels(tn, {{l, m->column}});
        ++count;
        again = true;
        break;
      }
    }
  }
  return count;
}

int rank_simplify(TensorNetwork& tn, const SimplifyOptions& o) {
  if (tn.nodes.size() < 2) return 0;
  const Hypergraph hg = [&] {
    TensorNetwork s = tn;
    for (auto& n : s.nodes) n.data.reset();
    return Hypergraph::from_network(s);
  }();
  std::vector<int> items;
  for (std::size_t p = 0; p < tn.nodes.size(); ++p) {
    if (!o.frozen.count(tn.nodes[p].id)) items.push_back(static_cast<int>(p));
  }
  TreeBuilder b(hg);
  Rng rng(0);
  const MergeFilter filter = [](const Incidence& a, const Incidence& c, const Incidence& m) {
    return m.size() <= std::max(a.size(), c.size());
  };
  const auto roots = greedy_fill(b, items, GreedyParams{0.0, 0.0}, rng, &filter);
  const ContractionTree& tree = b.tree();
  int count = tree.num_internal();

  if (count > 0) {
    const bool with_data = tn.has_data();
    std::vector<std::optional<DenseTensor>> slot(tree.num_vertices());
    std::vector<int> min_id(tree.num_vertices());
    for (int v = 0; v < tree.num_leaves(); ++v) {
      min_id[v] = tn.nodes[v].id;
      if (with_data && tree.parent(v) >= 0) slot[v] = tn.tensor(v);
    }
    for (int v = tree.num_leaves(); v < tree.num_vertices(); ++v) {
      const int l = tree.left(v), r = tree.right(v);
      min_id[v] = std::min(min_id[l], min_id[r]);
      if (with_data) {
        std::unordered_set<Label> keep;
        for (const auto& [e, c] : b.incidence(v)) keep.insert(hg.edge_label[e]);
        slot[v] = pairwise_contract(*slot[l], *slot[r], keep);
        slot[l].reset();
        slot[r].reset();
      }
    }
    std::vector<TensorNode> nodes;
    for (int v = 0; v < tree.num_leaves(); ++v) {
      if (tree.parent(v) < 0) nodes.push_back(tn.nodes[v]);
    }
    for (int v : roots) {
      if (tree.is_leaf(v)) continue;
      TensorNode n;
      n.id = min_id[v];
      if (with_data) {
        store(n, std::move(*slot[v]));
      } else {
        for (const auto& [e, c] : b.incidence(v)) n.indices.push_back(hg.edge_label[e]);
      }
      nodes.push_back(std::move(n));
    }
    std::sort(nodes.begin(), nodes.end(),
              [](const TensorNode& x, const TensorNode& y) { return x.id < y.id; });
    tn.nodes = std::move(nodes);
  }

  // Absorb scalars into the lowest-id other eligible node.
  for (bool again = true; again && tn.nodes.size() > 1;) {
    again = false;
    for (std::size_t p = 0; p < tn.nodes.size(); ++p) {
      const TensorNode& s = tn.nodes[p];
      if (!s.indices.empty() || o.frozen.count(s.id)) continue;
      std::optional<std::size_t> host;
      for (std::size_t q : by_id(tn)) {
        if (q != p && !o.frozen.count(tn.nodes[q].id)) {
          host = q;
          break;
        }
      }
      if (!host) break;
      if (s.data && tn.nodes[*host].data) {
        const Complex z = s.data->at(0);
        for (auto& v : *tn.nodes[*host].data) v *= z;
      }
      tn.nodes.erase(tn.nodes.begin() + static_cast<std::ptrdiff_t>(p));
      ++count;
      again = true;
      break;
    }
  }
  drop_unused_labels(tn);
  return count;
}

int split_simplify(TensorNetwork& tn, const SimplifyOptions& o) {
  int count = 0;
  int bond_counter = 0;
  const std::vector<std::size_t> order = by_id(tn);
  for (std::size_t pos : order) {
    if (!eligible(tn.nodes[pos], o)) continue;
    const DenseTensor t = tn.tensor(pos);
    const int r = t.rank();
    if (r < 2 || t.size() > o.split_max_size || !(t.max_abs() > 0.0)) continue;
    struct Best {
      std::int64_t size;
      std::vector<Label> left, right;
      Factorization f;
    };
    std::optional<Best> best;
    for (std::uint32_t mask = 1; mask < (1u << r) - 1; mask += 2) {
      std::vector<Label> left, right;
      std::int64_t rows = 1, cols = 1;
      for (int a = 0; a < r; ++a) {
        if (mask >> a & 1u) {
          left.push_back(t.labels[a]);
          rows *= t.dims[a];
        } else {
          right.push_back(t.labels[a]);
          cols *= t.dims[a];
        }
      }
      const bool singleton = left.size() < 2 || right.size() < 2;
      std::vector<Label> order_lr = left;
      order_lr.insert(order_lr.end(), right.begin(), right.end());
      Factorization f = exact_rank_factorize(transpose(t, order_lr).data, rows, cols, o.rel_tol);
      // Rank-2 pieces would be merged straight back by the rank pass unless
      // the bond is trivial.
      if (f.rank < 1 || (singleton && f.rank != 1)) continue;
      const std::int64_t sl = rows * f.rank, sr = f.rank * cols;
      const std::int64_t sz = std::max(sl, sr);
      if (sz >= t.size()) continue;
      if (!best || sz < best->size) best = Best{sz, left, right, std::move(f)};
    }
    if (!best) continue;
    const Label bond = fresh_bond(tn, bond_counter);
    tn.index_dims[bond] = best->f.rank;
    TensorNode right;
    right.id = tn.next_node_id();
    right.indices = {bond};
    right.indices.insert(right.indices.end(), best->right.begin(), best->right.end());
    right.data = std::move(best->f.right);
    TensorNode& left = tn.nodes[pos];
    left.indices = best->left;
    left.indices.push_back(bond);
    left.data = std::move(best->f.left);
    tn.nodes.push_back(std::move(right));
    ++count;
  }
  return count;
}

int renormalize(TensorNetwork& tn, const SimplifyOptions& o) {
  int count = 0;
  for (auto& n : tn.nodes) {
    if (!eligible(n, o)) continue;
    double m = 0.0;
    for (const auto& z : *n.data) m = std::max(m, std::abs(z));
    if (!(m > 0.0) || (m <= o.renorm_bound && m >= 1.0 / o.renorm_bound)) continue;
    for (auto& z : *n.data) z /= m;
    tn.norm_exponent += std::log10(m);
    ++count;
  }
  return count;
}

TensorNetwork simplify_fixed_point(TensorNetwork tn, const SimplifyOptions& o,
                                   SimplifyReport* report) {
  SimplifyReport rep;
  rep.nodes_before = static_cast<int>(tn.nodes.size());
  rep.hyperedges_before = static_cast<int>(tn.hyperedges().size());
  const double exp0 = tn.norm_exponent;
  bool converged = false;
  for (int cycle = 1; cycle <= o.max_cycles; ++cycle) {
    rep.cycles = cycle;
    int changed = 0;
    auto step = [&](int n, int& counter) {
      counter += n;
      changed += n;
      renormalize(tn, o);
    };
    renormalize(tn, o);
    step(antidiagonal_gauge(tn, o), rep.antidiagonal);
    if (o.diagonal) step(diagonal_reduce(tn, o), rep.diagonal);
    step(column_reduce(tn, o), rep.column);
    step(rank_simplify(tn, o), rep.rank);
    step(split_simplify(tn, o), rep.split);
    if (changed == 0) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NumericError("simplification did not reach a fixed point within " +
                       std::to_string(o.max_cycles) + " cycles");
  }
  rep.nodes_after = static_cast<int>(tn.nodes.size());
  rep.hyperedges_after = static_cast<int>(tn.hyperedges().size());
  rep.norm_exponent_delta = tn.norm_exponent - exp0;
  if (report != nullptr) *report = rep;
  return tn;
}

}  // namespace tnpath
