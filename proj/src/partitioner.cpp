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

#include "tnpath/partitioner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tnpath/error.hpp"
#include "tnpath/rng.hpp"

namespace tnpath {

namespace {

constexpr int kCoarseTarget = 40;
constexpr int kInitialTries = 8;
constexpr int kMaxPasses = 8;
constexpr std::size_t kMatchEdgeLimit = 64;

// Bisection state over a weighted-vertex hypergraph.
struct Level {
  int n = 0;
  std::vector<int> node_weight;
  std::vector<std::vector<int>> edges;
  std::vector<double> edge_weight;
  std::vector<std::vector<int>> node_edges;

  void index() {
    node_edges.assign(n, {});
    for (std::size_t e = 0; e < edges.size(); ++e) {
      for (int v : edges[e]) node_edges[v].push_back(static_cast<int>(e));
    }
  }
  int total_weight() const { return std::accumulate(node_weight.begin(), node_weight.end(), 0); }
};

struct Bounds {
  int max_w[2];
  int min_w[2];
};

double bisection_cut(const Level& h, const std::vector<int>& side) {
  double cut = 0.0;
  for (std::size_t e = 0; e < h.edges.size(); ++e) {
    const int s0 = side[h.edges[e][0]];
    for (int v : h.edges[e]) {
      if (side[v] != s0) {
        cut += h.edge_weight[e];
        break;
      }
    }
  }
  return cut;
}

class Refiner {
 public:
  Refiner(const Level& h, std::vector<int>& side, const Bounds& b) : h_(h), side_(side), b_(b) {
    pins_.assign(h.edges.size(), {0, 0});
    for (std::size_t e = 0; e < h.edges.size(); ++e) {
      for (int v : h.edges[e]) pins_[e][side[v]] += 1;
    }
    weight_[0] = weight_[1] = 0;
    for (int v = 0; v < h.n; ++v) weight_[side[v]] += h.node_weight[v];
  }

  double gain(int v) const {
    const int from = side_[v], to = 1 - from;
    double g = 0.0;
    for (int e : h_.node_edges[v]) {
      if (pins_[e][from] == 1) g += h_.edge_weight[e];
      if (pins_[e][to] == 0) g -= h_.edge_weight[e];
    }
    return g;
  }

  // During a pass one side may overshoot its bound by `slack`; only balanced
  // prefixes are kept, so tight bounds still admit swaps.
  bool can_move(int v, int slack = 0) const {
    const int from = side_[v], to = 1 - from;
    const int w = h_.node_weight[v];
    return weight_[to] + w <= b_.max_w[to] + slack && weight_[from] - w >= b_.min_w[from] - slack;
  }

  void move(int v) {
    const int from = side_[v], to = 1 - from;
    for (int e : h_.node_edges[v]) {
      pins_[e][from] -= 1;
      pins_[e][to] += 1;
    }
    weight_[from] -= h_.node_weight[v];
    weight_[to] += h_.node_weight[v];
    side_[v] = to;
  }

  bool balanced() const {
    for (int s = 0; s < 2; ++s) {
      if (weight_[s] > b_.max_w[s] || weight_[s] < b_.min_w[s]) return false;
    }
    return true;
  }

  // Moves best-gain vertices off an overloaded side until both sides fit.
  void rebalance() {
    for (int guard = 0; guard < 4 * h_.n && !balanced(); ++guard) {
      int heavy = (weight_[0] > b_.max_w[0] || weight_[1] < b_.min_w[1]) ? 0 : 1;
      int best = -1;
      double bg = -std::numeric_limits<double>::infinity();
      for (int v = 0; v < h_.n; ++v) {
        if (side_[v] != heavy) continue;
        const double g = gain(v);
        if (g > bg || (g == bg && best >= 0 && h_.node_weight[v] < h_.node_weight[best])) {
          bg = g;
          best = v;
        }
      }
      if (best < 0) break;
      move(best);
    }
  }

  // FM passes: tentatively move every vertex once in best-gain order under the
  // balance constraint, then roll back to the best prefix.
  void refine(Rng& rng) {
    std::vector<int> order(h_.n);
    std::iota(order.begin(), order.end(), 0);
    const int slack = *std::max_element(h_.node_weight.begin(), h_.node_weight.end());
    for (int pass = 0; pass < kMaxPasses; ++pass) {
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<double> g(h_.n);
      for (int v = 0; v < h_.n; ++v) g[v] = gain(v);
      std::vector<char> locked(h_.n, 0);
      std::vector<int> moves;
      double cum = 0.0, best_cum = 0.0;
      bool best_balanced = balanced();
      std::size_t best_len = 0;
      while (true) {
        int pick = -1;
        for (int v : order) {
          if (locked[v] || !can_move(v, slack)) continue;
          if (pick < 0 || g[v] > g[pick]) pick = v;
        }
        if (pick < 0) break;
        cum += g[pick];
        move(pick);
        locked[pick] = 1;
        moves.push_back(pick);
        for (int e : h_.node_edges[pick]) {
          for (int u : h_.edges[e]) {
            if (!locked[u]) g[u] = gain(u);
          }
        }
        const bool ok = balanced();
        if ((ok && !best_balanced) || (ok == best_balanced && cum > best_cum + 1e-12)) {
          best_cum = cum;
          best_len = moves.size();
          best_balanced = ok;
        }
        if (moves.size() - best_len > 50 + static_cast<std::size_t>(h_.n) / 4) break;
      }
      while (moves.size() > best_len) {
        move(moves.back());
        moves.pop_back();
      }
      if (best_len == 0) break;
    }
  }

 private:
  const Level& h_;
  std::vector<int>& side_;
  const Bounds& b_;
  std::vector<std::array<int, 2>> pins_;
  int weight_[2];
};

// Heavy-edge matching; returns the coarse level and fills `map`.
Level coarsen(const Level& h, int max_cluster, Rng& rng, std::vector<int>& map) {
  std::vector<int> order(h.n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  map.assign(h.n, -1);
  std::vector<double> rating(h.n, 0.0);
  std::vector<int> touched;
  int nc = 0;
  Level c;
  for (int u : order) {
    if (map[u] >= 0) continue;
    touched.clear();
    for (int e : h.node_edges[u]) {
      const auto& pins = h.edges[e];
      if (pins.size() > kMatchEdgeLimit) continue;
      const double r = h.edge_weight[e] / static_cast<double>(pins.size() - 1);
      for (int v : pins) {
        if (v == u || map[v] >= 0 || h.node_weight[u] + h.node_weight[v] > max_cluster) continue;
        if (rating[v] == 0.0) touched.push_back(v);
        rating[v] += r;
      }
    }
    int best = -1;
    for (int v : touched) {
      if (best < 0 || rating[v] > rating[best]) best = v;
    }
    for (int v : touched) rating[v] = 0.0;
    map[u] = nc;
    int w = h.node_weight[u];
    if (best >= 0) {
      map[best] = nc;
      w += h.node_weight[best];
    }
    c.node_weight.push_back(w);
    ++nc;
  }
  c.n = nc;
  for (std::size_t e = 0; e < h.edges.size(); ++e) {
    std::vector<int> pins;
    for (int v : h.edges[e]) pins.push_back(map[v]);
    std::sort(pins.begin(), pins.end());
    pins.erase(std::unique(pins.begin(), pins.end()), pins.end());
    if (pins.size() < 2) continue;
    c.edges.push_back(std::move(pins));
    c.edge_weight.push_back(h.edge_weight[e]);
  }
  c.index();
  return c;
}

std::vector<int> initial_bisection(const Level& h, const Bounds& b, bool grow, Rng& rng) {
  const int total = h.total_weight();
  const double frac = static_cast<double>(b.max_w[0]) / (b.max_w[0] + b.max_w[1]);
  const int target = static_cast<int>(std::lround(frac * total));
  std::vector<int> side(h.n, 1);
  int w0 = 0;
  if (grow) {
    std::vector<char> seen(h.n, 0);
    std::vector<int> queue;
    std::size_t head = 0;
    std::uniform_int_distribution<int> pick(0, h.n - 1);
    while (w0 < target) {
      if (head == queue.size()) {
        int s = pick(rng);
        for (int t = 0; t < h.n && seen[s]; ++t) s = (s + 1) % h.n;
        if (seen[s]) break;
        seen[s] = 1;
        queue.push_back(s);
      }
      const int u = queue[head++];
      side[u] = 0;
      w0 += h.node_weight[u];
      for (int e : h.node_edges[u]) {
        for (int v : h.edges[e]) {
          if (!seen[v]) {
            seen[v] = 1;
            queue.push_back(v);
          }
        }
      }
    }
  } else {
    std::vector<int> order(h.n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int v : order) {
      if (w0 >= target) break;
      side[v] = 0;
      w0 += h.node_weight[v];
    }
  }
  return side;
}

std::vector<int> multilevel_bisect(const Level& top, const Bounds& b, Rng& rng) {
  std::vector<Level> levels{top};
  std::vector<std::vector<int>> maps;
  const int max_cluster = std::max(1, std::min(b.max_w[0], b.max_w[1]) / 4);
  while (levels.back().n > kCoarseTarget) {
    std::vector<int> map;
    Level c = coarsen(levels.back(), max_cluster, rng, map);
    if (c.n > 0.9 * levels.back().n) break;
    maps.push_back(std::move(map));
    levels.push_back(std::move(c));
  }

  const Level& coarse = levels.back();
  // Best try by (balanced, cut, size difference).
  std::vector<int> best;
  double best_cut = std::numeric_limits<double>::infinity();
  int best_skew = std::numeric_limits<int>::max();
  bool best_ok = false;
  for (int t = 0; t < kInitialTries; ++t) {
    std::vector<int> side = initial_bisection(coarse, b, t % 2 == 0, rng);
    Refiner r(coarse, side, b);
    r.rebalance();
    r.refine(rng);
    const bool ok = r.balanced();
    const double cut = bisection_cut(coarse, side);
    int w[2] = {0, 0};
    for (int v = 0; v < coarse.n; ++v) w[side[v]] += coarse.node_weight[v];
    const int skew = std::abs(w[0] - w[1]);
    const bool better_cut = cut < best_cut - 1e-12;
    const bool tied_cut = !better_cut && cut <= best_cut + 1e-12;
    if ((ok && !best_ok) || (ok == best_ok && (better_cut || (tied_cut && skew < best_skew)))) {
      best = side;
      best_cut = cut;
      best_skew = skew;
      best_ok = ok;
    }
  }

  std::vector<int> side = std::move(best);
  for (int l = static_cast<int>(maps.size()) - 1; l >= 0; --l) {
    const Level& fine = levels[l];
    std::vector<int> fs(fine.n);
    for (int v = 0; v < fine.n; ++v) fs[v] = side[maps[l][v]];
    side = std::move(fs);
    Refiner r(fine, side, b);
    r.rebalance();
    r.refine(rng);
  }
  return side;
}

void recurse(const PartitionHypergraph& h, const std::vector<int>& nodes, int k, int offset,
             int lmax, Rng& rng, std::vector<int>& block) {
  if (k == 1) {
    for (int v : nodes) block[v] = offset;
    return;
  }
  const int k0 = k / 2, k1 = k - k0;
  const int n = static_cast<int>(nodes.size());
  std::vector<int> local(h.num_nodes, -1);
  for (int i = 0; i < n; ++i) local[nodes[i]] = i;
  Level lv;
  lv.n = n;
  lv.node_weight.assign(n, 1);
  for (std::size_t e = 0; e < h.edges.size(); ++e) {
    std::vector<int> pins;
    for (int v : h.edges[e]) {
      if (local[v] >= 0) pins.push_back(local[v]);
    }
    std::sort(pins.begin(), pins.end());
    pins.erase(std::unique(pins.begin(), pins.end()), pins.end());
    if (pins.size() < 2) continue;
    lv.edges.push_back(std::move(pins));
    lv.edge_weight.push_back(h.edge_weight[e]);
  }
  lv.index();
  Bounds b;
  b.max_w[0] = k0 * lmax;
  b.max_w[1] = k1 * lmax;
  b.min_w[0] = std::max(k0, n - k1 * lmax);
  b.min_w[1] = std::max(k1, n - k0 * lmax);
  const std::vector<int> side = multilevel_bisect(lv, b, rng);
  std::vector<int> part[2];
  for (int i = 0; i < n; ++i) part[side[i]].push_back(nodes[i]);
  // Guarantee enough vertices for the sub-blocks if refinement fell short.
  for (int s = 0; s < 2; ++s) {
    const int need = s == 0 ? k0 : k1;
    auto& mine = part[s];
    auto& other = part[1 - s];
    while (static_cast<int>(mine.size()) < need && !other.empty()) {
      mine.push_back(other.back());
      other.pop_back();
    }
  }
  recurse(h, part[0], k0, offset, lmax, rng, block);
  recurse(h, part[1], k1, offset + k0, lmax, rng, block);
}

}  // namespace

int max_block_size(int n, int k, double imbalance) {
  const int lo = (n + k - 1) / k;
  const int hi = static_cast<int>(std::floor((1.0 + imbalance) * n / k + 1e-9));
  return std::max(lo, hi);
}

double cut_weight(const PartitionHypergraph& h, const std::vector<int>& block) {
  double cut = 0.0;
  for (std::size_t e = 0; e < h.edges.size(); ++e) {
    if (h.edges[e].empty()) continue;
    const int b0 = block[h.edges[e][0]];
    for (int v : h.edges[e]) {
      if (block[v] != b0) {
        cut += h.edge_weight[e];
        break;
      }
    }
  }
  return cut;
}

Partition partition_hypergraph(const PartitionHypergraph& h, int k, double imbalance,
                               std::uint64_t seed) {
  if (k < 2 || k > h.num_nodes) {
    throw InfeasibleError("cannot split " + std::to_string(h.num_nodes) + " vertices into " +
                          std::to_string(k) + " non-empty blocks");
  }
  if (!(imbalance > 0.0)) throw UsageError("imbalance must be positive");
  if (h.edge_weight.size() != h.edges.size()) throw UsageError("edge weight count mismatch");
  Rng rng(seed);
  Partition p;
  p.parts = k;
  p.block.assign(h.num_nodes, 0);
  std::vector<int> nodes(h.num_nodes);
  std::iota(nodes.begin(), nodes.end(), 0);
  recurse(h, nodes, k, 0, max_block_size(h.num_nodes, k, imbalance), rng, p.block);
  p.block_size.assign(k, 0);
  for (int b : p.block) p.block_size[b] += 1;
  p.cut_weight = cut_weight(h, p.block);
  return p;
}

}  // namespace tnpath
