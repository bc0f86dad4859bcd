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

#include "tnpath/drivers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "tnpath/error.hpp"
#include "tnpath/partitioner.hpp"

namespace tnpath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------------------
// Exhaustive search.

int dp_fill(TreeBuilder& builder, std::span<const int> items, Target target, int cap) {
  const int m = static_cast<int>(items.size());
  if (m == 0) throw UsageError("dp_fill: no items");
  if (m > cap) {
    throw UsageError("exhaustive search cap exceeded: " + std::to_string(m) + " > " +
                     std::to_string(cap));
  }
  if (m == 1) return items[0];
  const Hypergraph& hg = builder.graph();

  // Local edges and their holders among the items.
  std::map<int, int> local_of;
  std::vector<int> edge_global;
  std::vector<std::uint32_t> holders;
  std::vector<int> count_in;
  for (int i = 0; i < m; ++i) {
    for (const auto& [e, c] : builder.incidence(items[i])) {
      auto [it, fresh] = local_of.emplace(e, static_cast<int>(edge_global.size()));
      if (fresh) {
        edge_global.push_back(e);
        holders.push_back(0);
        count_in.push_back(0);
      }
      holders[it->second] |= 1u << i;
      count_in[it->second] += c;
    }
  }
  const int L = static_cast<int>(edge_global.size());
  const int words = std::max(1, (L + 63) / 64);
  std::vector<char> external(L);
  for (int k = 0; k < L; ++k) {
    const int e = edge_global[k];
    external[k] = hg.edge_is_output[e] || count_in[k] < hg.degree(e);
  }

  const std::uint32_t full = (m == 32) ? ~0u : ((1u << m) - 1);
  const std::size_t nsub = static_cast<std::size_t>(full) + 1;
  std::vector<std::uint64_t> touched(nsub * words, 0), open(nsub * words, 0);
  auto T = [&](std::uint32_t s) { return touched.data() + static_cast<std::size_t>(s) * words; };
  auto O = [&](std::uint32_t s) { return open.data() + static_cast<std::size_t>(s) * words; };

  std::vector<std::uint32_t> adj(m, 0);
  for (int k = 0; k < L; ++k) {
    for (int i = 0; i < m; ++i) {
      if (holders[k] >> i & 1u) adj[i] |= holders[k] & ~(1u << i);
    }
  }
  for (int i = 0; i < m; ++i) {
    for (const auto& [e, c] : builder.incidence(items[i])) {
      const int k = local_of[e];
      T(1u << i)[k / 64] |= 1ull << (k % 64);
      O(1u << i)[k / 64] |= 1ull << (k % 64);
    }
  }

  // Components of the item graph.
  std::vector<std::uint32_t> comps;
  {
    std::uint32_t seen = 0;
    for (int i = 0; i < m; ++i) {
      if (seen >> i & 1u) continue;
      std::uint32_t r = 1u << i, prev = 0;
      while (r != prev) {
        prev = r;
        for (std::uint32_t b = r; b; b &= b - 1) r |= adj[std::countr_zero(b)];
      }
      comps.push_back(r);
      seen |= r;
    }
  }

  std::vector<char> connected(nsub, 0), comp_union(nsub, 0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    bool cu = true;
    for (std::uint32_t c : comps) {
      const std::uint32_t x = s & c;
      if (x != 0 && x != c) {
        cu = false;
        break;
      }
    }
    comp_union[s] = cu;
    const std::uint32_t low = s & (~s + 1);
    std::uint32_t r = low, prev = 0;
    while (r != prev) {
      prev = r;
      for (std::uint32_t b = r; b; b &= b - 1) r |= adj[std::countr_zero(b)] & s;
    }
    connected[s] = (r == s);
    if (std::popcount(s) >= 2) {
      const std::uint64_t* a = T(s ^ low);
      const std::uint64_t* b = T(low);
      std::uint64_t* t = T(s);
      std::uint64_t* o = O(s);
      for (int w = 0; w < words; ++w) {
        t[w] = a[w] | b[w];
        std::uint64_t bits = t[w];
        o[w] = bits;
        for (; bits; bits &= bits - 1) {
          const int k = w * 64 + std::countr_zero(bits);
          if (!external[k] && (holders[k] & ~s) == 0) o[w] &= ~(1ull << (k % 64));
        }
      }
    }
  }

  auto admissible = [&](std::uint32_t s) { return connected[s] || comp_union[s]; };
  std::vector<double> best_cost(nsub, kInf), best_width(nsub, kInf);
  std::vector<std::uint32_t> split(nsub, 0);
  for (int i = 0; i < m; ++i) {
    best_cost[1u << i] = 0.0;
    best_width[1u << i] = -kInf;
  }
  for (std::uint32_t s = 1; s <= full; ++s) {
    if (std::popcount(s) < 2 || !admissible(s)) continue;
    double ws = 0.0;
    const std::uint64_t* os = O(s);
    for (int w = 0; w < words; ++w) {
      for (std::uint64_t b = os[w]; b; b &= b - 1) ws += hg.edge_log2[edge_global[w * 64 + std::countr_zero(b)]];
    }
    const std::uint32_t low = s & (~s + 1);
    const std::uint32_t rest = s ^ low;
    double bc = kInf, bw = kInf;
    std::uint32_t bsplit = 0;
    // Enumerate s1 = low | sub for every proper subset sub of rest.
    std::uint32_t sub = rest;
    while (true) {
      const std::uint32_t s1 = low | sub;
      const std::uint32_t s2 = s ^ s1;
      if (s2 != 0 && admissible(s1) && admissible(s2) && best_cost[s1] < kInf &&
          best_cost[s2] < kInf) {
        const std::uint64_t* o1 = O(s1);
        const std::uint64_t* o2 = O(s2);
        bool share = false;
        for (int w = 0; w < words && !share; ++w) share = (o1[w] & o2[w]) != 0;
        if (share || (comp_union[s1] && comp_union[s2])) {
          double term = 1.0;
          for (int w = 0; w < words; ++w) {
            for (std::uint64_t b = o1[w] | o2[w]; b; b &= b - 1) {
              term *= static_cast<double>(hg.edge_dim[edge_global[w * 64 + std::countr_zero(b)]]);
            }
          }
          const double c = best_cost[s1] + best_cost[s2] + term;
          const double wv = std::max({best_width[s1], best_width[s2], ws});
          bool better;
          if (target == Target::kCost) {
            better = c < bc;
          } else {
            better = wv < bw || (wv == bw && c < bc);
          }
          if (better) {
            bc = c;
            bw = wv;
            bsplit = s1;
          }
        }
      }
      if (sub == 0) break;
      sub = (sub - 1) & rest;
    }
    best_cost[s] = bc;
    best_width[s] = bw;
    split[s] = bsplit;
  }
  if (best_cost[full] == kInf) throw Error("dp_fill: no admissible tree");

  // Rebuild bottom-up with an explicit stack.
  std::map<std::uint32_t, int> built;
  std::vector<std::pair<std::uint32_t, bool>> stack{{full, false}};
  while (!stack.empty()) {
    auto [s, expanded] = stack.back();
    stack.pop_back();
    if (std::popcount(s) == 1) {
      built[s] = items[std::countr_zero(s)];
      continue;
    }
    const std::uint32_t s1 = split[s], s2 = s ^ split[s];
    if (!expanded) {
      stack.emplace_back(s, true);
      stack.emplace_back(s2, false);
      stack.emplace_back(s1, false);
    } else {
      built[s] = builder.merge(built.at(s1), built.at(s2));
    }
  }
  return built.at(full);
}

// ---------------------------------------------------------------------------
// Greedy.

std::vector<int> greedy_fill(TreeBuilder& builder, std::span<const int> items,
                             const GreedyParams& params, Rng& rng, const MergeFilter* filter) {
  const Hypergraph& hg = builder.graph();
  std::vector<int> live(items.begin(), items.end());
  if (live.size() <= 1) return live;

  std::map<int, std::vector<int>> holders;  // edge -> live items holding it
  auto add_holder = [&](int v) {
    for (const auto& [e, c] : builder.incidence(v)) holders[e].push_back(v);
  };
  auto drop_holder = [&](int v) {
    for (const auto& [e, c] : builder.incidence(v)) {
      auto& h = holders[e];
      h.erase(std::remove(h.begin(), h.end(), v), h.end());
    }
  };
  for (int v : live) add_holder(v);

  auto size_v = [&](const Incidence& s) { return std::exp2(std::min(log2_size(s, hg), 1000.0)); };
  std::map<std::pair<int, int>, double> cand;
  std::map<int, std::set<int>> nbrs;
  auto consider = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    const auto& ia = builder.incidence(a);
    const auto& ib = builder.incidence(b);
    const Incidence mk = merge_incidence(ia, ib, hg);
    if (filter != nullptr && !(*filter)(ia, ib, mk)) return;
    cand[{a, b}] = size_v(mk) - params.alpha * (size_v(ia) + size_v(ib));
  };
  auto link = [&](int v) {
    std::set<int> ns;
    for (const auto& [e, c] : builder.incidence(v)) {
      for (int u : holders[e]) {
        if (u != v) ns.insert(u);
      }
    }
    for (int u : ns) {
      nbrs[u].insert(v);
      consider(u, v);
    }
    nbrs[v] = std::move(ns);
  };
  for (int v : live) nbrs[v];
  for (int v : live) {
    for (const auto& [e, c] : builder.incidence(v)) {
      for (int u : holders[e]) {
        if (u < v && nbrs[v].insert(u).second) {
          nbrs[u].insert(v);
          consider(u, v);
        }
      }
    }
  }

  bool all_pairs = false;
  while (live.size() > 1) {
    if (cand.empty()) {
      if (filter != nullptr || all_pairs) break;
      all_pairs = true;
      for (std::size_t i = 0; i < live.size(); ++i) {
        for (std::size_t j = i + 1; j < live.size(); ++j) consider(live[i], live[j]);
      }
      if (cand.empty()) break;
    }
    double cmin = kInf;
    for (const auto& [k, c] : cand) cmin = std::min(cmin, c);
    std::pair<int, int> pick;
    if (params.tau <= 0.0) {
      const double tol = 1e-12 * std::max(std::abs(cmin), 1.0);
      std::vector<std::pair<int, int>> ties;
      for (const auto& [k, c] : cand) {
        if (c <= cmin + tol) ties.push_back(k);
      }
      pick = ties.size() == 1 ? ties[0]
                              : ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng)];
    } else {
      const double temp = params.tau * std::max(std::abs(cmin), 1.0);
      std::vector<double> w;
      std::vector<std::pair<int, int>> keys;
      w.reserve(cand.size());
      for (const auto& [k, c] : cand) {
        keys.push_back(k);
        w.push_back(std::exp(-(c - cmin) / temp));
      }
      std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
      pick = keys[dist(rng)];
    }
    const auto [a, b] = pick;
    std::set<int> touched;
    for (int u : nbrs[a]) touched.insert(u);
    for (int u : nbrs[b]) touched.insert(u);
    touched.erase(a);
    touched.erase(b);
    for (int u : touched) {
      cand.erase({std::min(u, a), std::max(u, a)});
      cand.erase({std::min(u, b), std::max(u, b)});
      nbrs[u].erase(a);
      nbrs[u].erase(b);
    }
    cand.erase({a, b});
    if (all_pairs) {
      for (int u : live) {
        if (u == a || u == b) continue;
        cand.erase({std::min(u, a), std::max(u, a)});
        cand.erase({std::min(u, b), std::max(u, b)});
      }
    }
    nbrs.erase(a);
    nbrs.erase(b);
    drop_holder(a);
    drop_holder(b);
    const int k = builder.merge(a, b);
    live.erase(std::remove_if(live.begin(), live.end(), [&](int v) { return v == a || v == b; }),
               live.end());
    add_holder(k);
    if (all_pairs) {
      nbrs[k];
      for (int u : live) consider(u, k);
    } else {
      link(k);
    }
    live.push_back(k);
  }
  return live;
}

// ---------------------------------------------------------------------------

ContractionTree optimal_dp(const Hypergraph& hg, Target target, int cap) {
  if (hg.num_nodes() == 0) throw UsageError("empty network");
  TreeBuilder b(hg);
  std::vector<int> items(hg.num_nodes());
  std::iota(items.begin(), items.end(), 0);
  dp_fill(b, items, target, cap);
  return b.release();
}

ContractionTree greedy_sample(const Hypergraph& hg, const GreedyParams& params,
                              std::uint64_t seed) {
  if (hg.num_nodes() == 0) throw UsageError("empty network");
  Rng rng(seed);
  TreeBuilder b(hg);
  std::vector<int> items(hg.num_nodes());
  std::iota(items.begin(), items.end(), 0);
  greedy_fill(b, items, params, rng);
  return b.release();
}

// ---------------------------------------------------------------------------
// Community driver.

std::vector<double> edge_betweenness(const SimpleGraph& g, const std::vector<char>* removed) {
  const int n = g.num_vertices;
  const int ne = static_cast<int>(g.edges.size());
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge)
  for (int e = 0; e < ne; ++e) {
    if (removed != nullptr && (*removed)[e]) continue;
    const auto [u, v] = g.edges[e];
    adj[u].emplace_back(v, e);
    adj[v].emplace_back(u, e);
  }
  std::vector<double> bc(ne, 0.0);
  std::vector<double> dist(n), sigma(n), delta(n);
  std::vector<std::vector<std::pair<int, int>>> pred(n);
  std::vector<int> order;
  using Item = std::pair<double, int>;
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : pred) p.clear();
    order.clear();
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[s] = 0.0;
    sigma[s] = 1.0;
    pq.emplace(0.0, s);
    std::vector<char> done(n, 0);
    while (!pq.empty()) {
      const auto [d, u] = pq.top();
      pq.pop();
      if (done[u]) continue;
      done[u] = 1;
      order.push_back(u);
      for (const auto& [v, e] : adj[u]) {
        if (done[v]) continue;
        const double nd = d + g.lengths[e];
        const double tol = 1e-10 * std::max(1.0, std::abs(nd));
        if (nd < dist[v] - tol) {
          dist[v] = nd;
          sigma[v] = sigma[u];
          pred[v].assign(1, {u, e});
          pq.emplace(nd, v);
        } else if (std::abs(nd - dist[v]) <= tol) {
          sigma[v] += sigma[u];
          pred[v].emplace_back(u, e);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int w = *it;
      for (const auto& [v, e] : pred[w]) {
        const double c = sigma[v] / sigma[w] * (1.0 + delta[w]);
        bc[e] += c;
        delta[v] += c;
      }
    }
  }
  for (double& x : bc) x *= 0.5;
  return bc;
}

ContractionTree girvan_newman_tree(const Hypergraph& hg, double weight_noise,
                                   std::uint64_t seed) {
  const int n = hg.num_nodes();
  if (n == 0) throw UsageError("empty network");
  if (hg.has_hyperedges()) {
    throw UsageError("community driver requires a network without hyperedges");
  }
  Rng rng(seed);
  std::map<std::pair<int, int>, double> agg;
  for (int e = 0; e < hg.num_edges(); ++e) {
    if (hg.degree(e) != 2) continue;
    int u = hg.edge_nodes[e][0], v = hg.edge_nodes[e][1];
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    agg[{u, v}] += hg.edge_log2[e];
  }
  SimpleGraph g;
  g.num_vertices = n;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const auto& [uv, w] : agg) {
    g.edges.push_back(uv);
    const double noise = weight_noise > 0.0 ? std::exp(weight_noise * normal(rng)) : 1.0;
    // Unit-dim bonds still get a small positive length.
    g.lengths.push_back(std::max(w, 1e-3) * noise);
  }
  const int ne = static_cast<int>(g.edges.size());

  // Betweenness only changes inside the component that lost edges, so keep a
  // per-edge cache and recompute one component at a time.
  std::vector<char> removed(ne, 0);
  std::vector<int> removal_order;
  std::vector<double> bc = edge_betweenness(g, &removed);
  int remaining = ne;
  while (remaining > 0) {
    double gmax = -1.0;
    for (int e = 0; e < ne; ++e) {
      if (!removed[e]) gmax = std::max(gmax, bc[e]);
    }
    std::vector<int> batch;
    for (int e = 0; e < ne; ++e) {
      if (!removed[e] && bc[e] >= gmax - 1e-9 * std::max(1.0, gmax)) batch.push_back(e);
    }
    for (int e : batch) {
      removed[e] = 1;
      removal_order.push_back(e);
      --remaining;
    }
    if (remaining == 0) break;
    // Vertices whose component changed.
    std::vector<char> dirty(n, 0);
    std::vector<std::vector<std::pair<int, int>>> adj(n);
    for (int e = 0; e < ne; ++e) {
      if (removed[e]) continue;
      adj[g.edges[e].first].emplace_back(g.edges[e].second, e);
      adj[g.edges[e].second].emplace_back(g.edges[e].first, e);
    }
    std::vector<int> stack;
    for (int e : batch) {
      for (int x : {g.edges[e].first, g.edges[e].second}) {
        if (dirty[x]) continue;
        dirty[x] = 1;
        stack.push_back(x);
        while (!stack.empty()) {
          const int u = stack.back();
          stack.pop_back();
          for (const auto& [v, f] : adj[u]) {
            if (!dirty[v]) {
              dirty[v] = 1;
              stack.push_back(v);
            }
          }
        }
      }
    }
    std::vector<int> local(n, -1);
    SimpleGraph sub;
    for (int v = 0; v < n; ++v) {
      if (dirty[v]) local[v] = sub.num_vertices++;
    }
    std::vector<int> sub_edge;
    for (int e = 0; e < ne; ++e) {
      if (removed[e] || !dirty[g.edges[e].first]) continue;
      sub.edges.emplace_back(local[g.edges[e].first], local[g.edges[e].second]);
      sub.lengths.push_back(g.lengths[e]);
      sub_edge.push_back(e);
    }
    const auto sbc = edge_betweenness(sub);
    for (std::size_t i = 0; i < sub_edge.size(); ++i) bc[sub_edge[i]] = sbc[i];
  }

  TreeBuilder b(hg);
  std::vector<int> uf(n), top(n);
  std::iota(uf.begin(), uf.end(), 0);
  std::iota(top.begin(), top.end(), 0);
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (auto it = removal_order.rbegin(); it != removal_order.rend(); ++it) {
    const int ru = find(g.edges[*it].first), rv = find(g.edges[*it].second);
    if (ru == rv) continue;
    const int v = b.merge(top[ru], top[rv]);
    uf[rv] = ru;
    top[ru] = v;
  }
  std::vector<int> rest;
  for (int x = 0; x < n; ++x) {
    if (find(x) == x) rest.push_back(top[x]);
  }
  greedy_fill(b, rest, GreedyParams{}, rng);
  return b.release();
}

// ---------------------------------------------------------------------------
// Divisive driver.

namespace {

constexpr int kDpFinishLimit = 12;
constexpr int kPartitionTries = 4;

int finish_group(TreeBuilder& b, const std::vector<int>& items, Rng& rng) {
  if (items.size() == 1) return items[0];
  if (static_cast<int>(items.size()) <= kDpFinishLimit) return dp_fill(b, items, Target::kCost);
  const auto r = greedy_fill(b, items, GreedyParams{1.0, 0.0}, rng);
  return r.front();
}

int divide(TreeBuilder& b, const std::vector<int>& items, const PartitionParams& p, Rng& rng) {
  if (items.size() == 1) return items[0];
  if (static_cast<int>(items.size()) <= std::max(p.cutoff, 1)) return finish_group(b, items, rng);
  const Hypergraph& hg = b.graph();

  std::map<int, std::vector<int>> holders;
  std::map<int, int> held;  // leaves inside the group holding each edge
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (const auto& [e, c] : b.incidence(items[i])) {
      holders[e].push_back(static_cast<int>(i));
      held[e] += c;
    }
  }
  PartitionHypergraph ph;
  ph.num_nodes = static_cast<int>(items.size());
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const auto& [e, pins] : holders) {
    if (pins.size() < 2) continue;
    ph.edges.push_back(pins);
    const double noise = p.weight_noise > 0.0 ? std::exp(p.weight_noise * normal(rng)) : 1.0;
    ph.edge_weight.push_back(std::max(hg.edge_log2[e], 1e-3) * noise);
  }
  // Tries are ranked by the summed size of the block tensors, which also
  // counts the legs leaving the group.
  auto block_cost = [&](const Partition& part) {
    std::vector<double> w(part.parts, 0.0);
    for (const auto& [e, pins] : holders) {
      const bool leaves_group = hg.edge_is_output[e] || held[e] < hg.degree(e);
      std::vector<int> in;
      for (int i : pins) in.push_back(part.block[i]);
      std::sort(in.begin(), in.end());
      in.erase(std::unique(in.begin(), in.end()), in.end());
      if (!leaves_group && in.size() < 2) continue;
      for (int blk : in) w[blk] += hg.edge_log2[e];
    }
    double total = 0.0;
    for (double x : w) total += std::exp2(x);
    return total;
  };
  const int k = std::min<int>(p.parts, static_cast<int>(items.size()));
  Partition part = partition_hypergraph(ph, k, p.imbalance, rng());
  double best = block_cost(part);
  for (int t = 1; t < kPartitionTries; ++t) {
    Partition other = partition_hypergraph(ph, k, p.imbalance, rng());
    const double c = block_cost(other);
    if (c < best) {
      best = c;
      part = std::move(other);
    }
  }
  std::vector<std::vector<int>> groups(part.parts);
  for (std::size_t i = 0; i < items.size(); ++i) groups[part.block[i]].push_back(items[i]);
  std::vector<int> subs;
  for (const auto& grp : groups) {
    if (!grp.empty()) subs.push_back(divide(b, grp, p, rng));
  }
  return finish_group(b, subs, rng);
}

}  // namespace

ContractionTree partition_divide(const Hypergraph& hg, const PartitionParams& params,
                                 std::uint64_t seed) {
  if (hg.num_nodes() == 0) throw UsageError("empty network");
  if (params.parts < 2) throw UsageError("partition driver needs at least 2 parts");
  if (!(params.imbalance > 0.0)) throw UsageError("imbalance must be positive");
  Rng rng(seed);
  TreeBuilder b(hg);
  std::vector<int> items(hg.num_nodes());
  std::iota(items.begin(), items.end(), 0);
  divide(b, items, params, rng);
  return b.release();
}

// ---------------------------------------------------------------------------

TensorNetwork expand_hyperedges(const TensorNetwork& tn, const ContractionTree& hierarchy) {
  const Hypergraph hg = Hypergraph::from_network(tn);
  if (hierarchy.num_leaves() != hg.num_nodes() || !hierarchy.is_complete()) {
    throw UsageError("hierarchy does not match the network");
  }
  TensorNetwork out = tn;
  int next_id = tn.next_node_id();
  const bool with_data = tn.has_data();
  const int nv = hierarchy.num_vertices();
  for (int e = 0; e < hg.num_edges(); ++e) {
    const int deg = hg.degree(e);
    const bool is_out = hg.edge_is_output[e];
    if (deg < 2 || deg + (is_out ? 1 : 0) < 3) continue;
    const Label& label = hg.edge_label[e];
    const std::int64_t dim = hg.edge_dim[e];
    std::vector<int> cnt(nv, 0);
    for (int v : hg.edge_nodes[e]) cnt[v] += 1;
    for (int v = hierarchy.num_leaves(); v < nv; ++v) {
      cnt[v] = cnt[hierarchy.left(v)] + cnt[hierarchy.right(v)];
    }
    int fresh = 0;
    auto new_label = [&]() {
      Label l;
      do {
        l = label + "~" + std::to_string(fresh++);
      } while (out.index_dims.count(l));
      out.index_dims[l] = dim;
      return l;
    };
    auto add_copy = [&](const std::vector<Label>& legs) {
      TensorNode node;
      node.id = next_id++;
      node.indices = legs;
      if (with_data) {
        std::vector<Complex> d(static_cast<std::size_t>(dim * dim * dim), Complex(0.0));
        for (std::int64_t i = 0; i < dim; ++i) d[static_cast<std::size_t>(i * dim * dim + i * dim + i)] = 1.0;
        node.data = std::move(d);
      }
      out.nodes.push_back(std::move(node));
    };
    // Wire from the subtree at v up to its parent junction carries `up`.
    std::vector<std::pair<int, Label>> stack;
    auto push_children = [&](int v) {
      const int l = hierarchy.left(v), r = hierarchy.right(v);
      if (is_out) {
        const Label a = new_label(), c = new_label();
        add_copy({a, c, label});
        stack.emplace_back(l, a);
        stack.emplace_back(r, c);
      } else {
        const Label s = new_label();
        stack.emplace_back(l, s);
        stack.emplace_back(r, s);
      }
    };
    int lca = hierarchy.root();
    while (!hierarchy.is_leaf(lca)) {
      if (cnt[hierarchy.left(lca)] == deg) {
        lca = hierarchy.left(lca);
      } else if (cnt[hierarchy.right(lca)] == deg) {
        lca = hierarchy.right(lca);
      } else {
        break;
      }
    }
    push_children(lca);
    while (!stack.empty()) {
      auto [v, up] = stack.back();
      stack.pop_back();
      if (cnt[v] == 0) continue;
      if (hierarchy.is_leaf(v)) {
        for (auto& l : out.nodes[v].indices) {
          if (l == label) l = up;
        }
        continue;
      }
      const int l = hierarchy.left(v), r = hierarchy.right(v);
      if (cnt[l] == 0) {
        stack.emplace_back(r, up);
      } else if (cnt[r] == 0) {
        stack.emplace_back(l, up);
      } else {
        const Label a = new_label(), c = new_label();
        add_copy({a, c, up});
        stack.emplace_back(l, a);
        stack.emplace_back(r, c);
      }
    }
    if (!is_out) out.index_dims.erase(label);
  }
  return out;
}

}  // namespace tnpath
