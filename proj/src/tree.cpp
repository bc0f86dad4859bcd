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

#include "tnpath/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tnpath/error.hpp"

namespace tnpath {

ContractionTree::ContractionTree(int num_leaves) : n_(num_leaves), parent_(num_leaves, -1) {
  if (num_leaves < 0) throw UsageError("negative leaf count");
}

int ContractionTree::merge(int a, int b) {
  const int nv = num_vertices();
  if (a < 0 || b < 0 || a >= nv || b >= nv || a == b) {
    throw UsageError("merge: vertex out of range");
  }
  if (parent_[a] >= 0 || parent_[b] >= 0) throw UsageError("merge: vertex already merged");
  const int v = nv;
  children_.emplace_back(a, b);
  parent_.push_back(-1);
  parent_[a] = v;
  parent_[b] = v;
  return v;
}

bool ContractionTree::is_complete() const { return n_ >= 1 && num_internal() == n_ - 1; }

int ContractionTree::root() const {
  if (!is_complete()) throw UsageError("tree is incomplete");
  return num_vertices() - 1;
}

std::vector<int> ContractionTree::leaves_under(int v) const {
  std::vector<int> out, stack{v};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    if (is_leaf(u)) {
      out.push_back(u);
    } else {
      stack.push_back(right(u));
      stack.push_back(left(u));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

Incidence leaf_incidence(const Hypergraph& hg, int node) {
  Incidence s;
  for (int e : hg.node_edges[node]) s.emplace_back(e, 1);
  std::sort(s.begin(), s.end());
  return s;
}

Incidence merge_incidence(const Incidence& a, const Incidence& b, const Hypergraph& hg) {
  Incidence out;
  out.reserve(a.size() + b.size());
  auto keep = [&](int e, int count) {
    if (count < hg.degree(e) || hg.edge_is_output[e]) out.emplace_back(e, count);
  };
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      keep(a[i].first, a[i].second);
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      keep(b[j].first, b[j].second);
      ++j;
    } else {
      keep(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

double log2_size(const Incidence& s, const Hypergraph& hg) {
  double w = 0.0;
  for (const auto& [e, c] : s) w += hg.edge_log2[e];
  return w;
}

double size_of(const Incidence& s, const Hypergraph& hg) {
  double p = 1.0;
  for (const auto& [e, c] : s) p *= static_cast<double>(hg.edge_dim[e]);
  return p;
}

std::vector<int> union_edges(const Incidence& a, const Incidence& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++].first);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++].first);
    } else {
      out.push_back(a[i].first);
      ++i;
      ++j;
    }
  }
  return out;
}

std::vector<Incidence> annotate_incidence(const ContractionTree& tree, const Hypergraph& hg) {
  if (tree.num_leaves() != hg.num_nodes()) {
    throw DataError("tree has " + std::to_string(tree.num_leaves()) + " leaves but network has " +
                    std::to_string(hg.num_nodes()) + " nodes");
  }
  std::vector<Incidence> s(tree.num_vertices());
  for (int v = 0; v < tree.num_leaves(); ++v) s[v] = leaf_incidence(hg, v);
  for (int v = tree.num_leaves(); v < tree.num_vertices(); ++v) {
    s[v] = merge_incidence(s[tree.left(v)], s[tree.right(v)], hg);
  }
  return s;
}

PathMetrics metrics(const ContractionTree& tree, const Hypergraph& hg) {
  const auto s = annotate_incidence(tree, hg);
  PathMetrics m;
  double log2_cost = -std::numeric_limits<double>::infinity();
  double max_elems = 0.0;
  for (int v = tree.num_leaves(); v < tree.num_vertices(); ++v) {
    const double w = log2_size(s[v], hg);
    m.width = std::max(m.width, w);
    max_elems = std::max(max_elems, size_of(s[v], hg));
    double vc = 0.0, term = 1.0;
    for (int e : union_edges(s[tree.left(v)], s[tree.right(v)])) {
      vc += hg.edge_log2[e];
      term *= static_cast<double>(hg.edge_dim[e]);
    }
    m.cost += term;
    // Running log-sum so that the log stays finite past double range.
    if (std::isinf(log2_cost)) {
      log2_cost = vc;
    } else {
      const double hi = std::max(log2_cost, vc), lo = std::min(log2_cost, vc);
      log2_cost = hi + std::log2(1.0 + std::exp2(lo - hi));
    }
  }
  m.log10_cost = std::isinf(log2_cost) ? 0.0 : log2_cost * std::log10(2.0);
  m.flops_real = 2.0 * m.cost;
  m.flops_complex = 8.0 * m.cost;
  constexpr double kMax = static_cast<double>(std::numeric_limits<std::int64_t>::max());
  m.peak_memory_elements = max_elems >= kMax ? std::numeric_limits<std::int64_t>::max()
                                             : static_cast<std::int64_t>(max_elems);
  return m;
}

// ---------------------------------------------------------------------------

TreeBuilder::TreeBuilder(const Hypergraph& hg) : hg_(&hg), tree_(hg.num_nodes()) {
  inc_.reserve(2 * hg.num_nodes());
  for (int v = 0; v < hg.num_nodes(); ++v) inc_.push_back(leaf_incidence(hg, v));
}

int TreeBuilder::merge(int a, int b) {
  const int v = tree_.merge(a, b);
  inc_.push_back(merge_incidence(inc_[a], inc_[b], *hg_));
  return v;
}

std::vector<int> TreeBuilder::roots() const {
  std::vector<int> r;
  for (int v = 0; v < tree_.num_vertices(); ++v) {
    if (tree_.parent(v) < 0) r.push_back(v);
  }
  return r;
}

// ---------------------------------------------------------------------------

ContractionTree tree_from_linear(const LinearPath& path, int num_leaves) {
  if (num_leaves >= 1 && static_cast<int>(path.size()) != num_leaves - 1) {
    throw UsageError("linear path has " + std::to_string(path.size()) + " steps for " +
                     std::to_string(num_leaves) + " leaves");
  }
  ContractionTree tree(num_leaves);
  std::vector<int> live(num_leaves);
  for (int i = 0; i < num_leaves; ++i) live[i] = i;
  for (const auto& [i, j] : path) {
    const int n = static_cast<int>(live.size());
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
      throw UsageError("linear path position out of range: (" + std::to_string(i) + "," +
                       std::to_string(j) + ") with " + std::to_string(n) + " live nodes");
    }
    const int a = live[i], b = live[j];
    live.erase(live.begin() + std::max(i, j));
    live.erase(live.begin() + std::min(i, j));
    live.push_back(tree.merge(a, b));
  }
  return tree;
}

LinearPath linear_from_tree(const ContractionTree& tree) {
  std::vector<int> live(tree.num_leaves());
  for (int i = 0; i < tree.num_leaves(); ++i) live[i] = i;
  LinearPath path;
  for (int k = 0; k < tree.num_internal(); ++k) {
    const auto [a, b] = tree.merges()[k];
    const int i = static_cast<int>(std::find(live.begin(), live.end(), a) - live.begin());
    const int j = static_cast<int>(std::find(live.begin(), live.end(), b) - live.begin());
    path.emplace_back(i, j);
    live.erase(live.begin() + std::max(i, j));
    live.erase(live.begin() + std::min(i, j));
    live.push_back(tree.num_leaves() + k);
  }
  return path;
}

ContractionTree tree_from_ssa(const SsaPath& path, int num_leaves) {
  if (num_leaves >= 1 && static_cast<int>(path.size()) != num_leaves - 1) {
    throw UsageError("ssa path has " + std::to_string(path.size()) + " steps for " +
                     std::to_string(num_leaves) + " leaves");
  }
  ContractionTree tree(num_leaves);
  for (const auto& [a, b] : path) tree.merge(a, b);
  return tree;
}

SsaPath ssa_from_tree(const ContractionTree& tree) { return tree.merges(); }

}  // namespace tnpath
