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

#include <algorithm>
#include <numeric>
#include <set>

#include "tnpath/drivers.hpp"
#include "tnpath/error.hpp"
#include "tnpath/tree.hpp"

namespace tnpath {

namespace {

int join(TreeBuilder& b, const std::vector<int>& items, Rng& rng) {
  if (items.size() == 1) return items[0];
  if (items.size() <= 8) return dp_fill(b, items, Target::kCost);
  return greedy_fill(b, items, GreedyParams{}, rng).front();
}

}  // namespace

ContractionTree tree_from_edge_order(std::span<const Label> order, const Hypergraph& hg) {
  const int n = hg.num_nodes();
  if (n == 0) throw UsageError("empty network");
  std::vector<char> seen(hg.num_edges(), 0);
  for (const auto& l : order) {
    const int e = hg.edge_id(l);
    if (e < 0) throw UsageError("unknown index in ordering: " + l);
    if (seen[e]) throw UsageError("repeated index in ordering: " + l);
    seen[e] = 1;
  }
  for (int e = 0; e < hg.num_edges(); ++e) {
    if (!seen[e] && !hg.edge_is_output[e] && hg.degree(e) >= 2) {
      throw UsageError("ordering is missing index " + hg.edge_label[e]);
    }
  }

  Rng rng(0);
  TreeBuilder b(hg);
  std::vector<int> uf(n), top(n);
  std::iota(uf.begin(), uf.end(), 0);
  std::iota(top.begin(), top.end(), 0);
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (const auto& l : order) {
    const int e = hg.edge_id(l);
    std::set<int> reps;
    for (int v : hg.edge_nodes[e]) reps.insert(find(v));
    if (reps.size() < 2) continue;
    std::vector<int> items;
    for (int r : reps) items.push_back(top[r]);
    const int v = join(b, items, rng);
    const int r0 = *reps.begin();
    for (int r : reps) uf[r] = r0;
    top[r0] = v;
  }
  std::vector<int> rest;
  for (int x = 0; x < n; ++x) {
    if (find(x) == x) rest.push_back(top[x]);
  }
  join(b, rest, rng);
  return b.release();
}

std::vector<Label> minfill_order(const Hypergraph& hg, std::uint64_t seed) {
  Rng rng(seed);
  const int ne = hg.num_edges();
  std::vector<char> active(ne, 0);
  for (int e = 0; e < ne; ++e) active[e] = !hg.edge_is_output[e];
  std::vector<std::set<int>> adj(ne);
  for (const auto& edges : hg.node_edges) {
    for (int a : edges) {
      for (int c : edges) {
        if (a != c && active[a] && active[c]) adj[a].insert(c);
      }
    }
  }
  auto fill = [&](int v) {
    long long f = 0;
    for (auto i = adj[v].begin(); i != adj[v].end(); ++i) {
      for (auto j = std::next(i); j != adj[v].end(); ++j) {
        if (!adj[*i].count(*j)) ++f;
      }
    }
    return f;
  };
  std::vector<Label> order;
  int remaining = static_cast<int>(std::count(active.begin(), active.end(), 1));
  while (remaining > 0) {
    long long best = -1;
    std::vector<int> ties;
    for (int v = 0; v < ne; ++v) {
      if (!active[v]) continue;
      const long long f = fill(v);
      if (best < 0 || f < best) {
        best = f;
        ties.assign(1, v);
      } else if (f == best) {
        ties.push_back(v);
      }
    }
    const int v = ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng)];
    for (int a : adj[v]) {
      for (int c : adj[v]) {
        if (a != c) adj[a].insert(c);
      }
      adj[a].erase(v);
    }
    adj[v].clear();
    active[v] = 0;
    --remaining;
    order.push_back(hg.edge_label[v]);
  }
  return order;
}

}  // namespace tnpath
