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

#include "tnpath/slicer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

#include "tnpath/error.hpp"
#include "tnpath/rng.hpp"

namespace tnpath {

namespace {

constexpr double kTol = 1e-9;

double log_add(double a, double b) {
  if (std::isinf(a)) return b;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log2(1.0 + std::exp2(lo - hi));
}

struct Evaluator {
  const ContractionTree& tree;
  const Hypergraph& hg;
  std::vector<Incidence> inc;

  Evaluator(const ContractionTree& t, const Hypergraph& h)
      : tree(t), hg(h), inc(annotate_incidence(t, h)) {}

  // Per-vertex log2 size with the sliced edges removed.
  double vertex_width(int v, const std::vector<char>& sliced) const {
    double w = 0.0;
    for (const auto& [e, c] : inc[v]) {
      if (!sliced[e]) w += hg.edge_log2[e];
    }
    return w;
  }

  SliceSet eval(const std::vector<char>& sliced) const {
    SliceSet s;
    double log2_d = 0.0;
    for (int e = 0; e < hg.num_edges(); ++e) {
      if (sliced[e]) {
        s.labels.push_back(hg.edge_label[e]);
        s.d_sliced *= static_cast<double>(hg.edge_dim[e]);
        log2_d += hg.edge_log2[e];
      }
    }
    double per = 0.0;
    double log2_per = -std::numeric_limits<double>::infinity();
    for (int v = tree.num_leaves(); v < tree.num_vertices(); ++v) {
      s.width = std::max(s.width, vertex_width(v, sliced));
      double vc = 0.0, term = 1.0;
      for (int e : union_edges(inc[tree.left(v)], inc[tree.right(v)])) {
        if (sliced[e]) continue;
        vc += hg.edge_log2[e];
        term *= static_cast<double>(hg.edge_dim[e]);
      }
      per += term;
      log2_per = log_add(log2_per, vc);
    }
    s.cost = per * s.d_sliced;
    s.log10_cost = std::isinf(log2_per) ? 0.0 : (log2_per + log2_d) * std::log10(2.0);
    return s;
  }
};

}  // namespace

SliceSet sliced_metrics(const ContractionTree& tree, const Hypergraph& hg,
                        std::span<const Label> labels) {
  std::vector<char> sliced(hg.num_edges(), 0);
  for (const auto& l : labels) {
    const int e = hg.edge_id(l);
    if (e < 0) throw UsageError("unknown slice label " + l);
    if (hg.edge_is_output[e]) throw UsageError("cannot slice output label " + l);
    sliced[e] = 1;
  }
  return Evaluator(tree, hg).eval(sliced);
}

SliceSet greedy_slice(const ContractionTree& tree, const Hypergraph& hg, double target_width,
                      int restarts, double noise, std::uint64_t seed) {
  if (target_width + kTol < hg.max_leaf_log2()) {
    throw InfeasibleError("slice target " + std::to_string(target_width) +
                          " is below the largest input tensor (" +
                          std::to_string(hg.max_leaf_log2()) + ")");
  }
  const Evaluator ev(tree, hg);
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::optional<SliceSet> best;
  for (int r = 0; r < std::max(restarts, 1); ++r) {
    const double amp = r == 0 ? 0.0 : noise;
    std::vector<char> sliced(hg.num_edges(), 0);
    SliceSet cur = ev.eval(sliced);
    bool stuck = false;
    while (cur.width > target_width + kTol) {
      std::set<int> pool;
      for (int v = tree.num_leaves(); v < tree.num_vertices(); ++v) {
        if (ev.vertex_width(v, sliced) < cur.width - kTol) continue;
        for (const auto& [e, c] : ev.inc[v]) {
          if (!sliced[e] && !hg.edge_is_output[e]) pool.insert(e);
        }
      }
      if (pool.empty()) {
        stuck = true;
        break;
      }
      int pick = -1;
      double pick_score = 0.0;
      SliceSet pick_set;
      for (int e : pool) {
        sliced[e] = 1;
        SliceSet cand = ev.eval(sliced);
        sliced[e] = 0;
        const double u = amp > 0.0 ? unif(rng) : 0.0;
        const double score = cand.log10_cost + std::log10(std::max(1.0 + amp * u, 1e-12));
        if (pick < 0 || score < pick_score ||
            (score == pick_score && cand.width < pick_set.width)) {
          pick = e;
          pick_score = score;
          pick_set = std::move(cand);
        }
      }
      sliced[pick] = 1;
      cur = std::move(pick_set);
    }
    if (stuck) continue;
    if (!best || cur.log10_cost < best->log10_cost - 1e-12 ||
        (std::abs(cur.log10_cost - best->log10_cost) <= 1e-12 &&
         cur.labels.size() < best->labels.size())) {
      best = std::move(cur);
    }
  }
  if (!best) throw InfeasibleError("no slice set reaches width " + std::to_string(target_width));
  return *best;
}

}  // namespace tnpath
