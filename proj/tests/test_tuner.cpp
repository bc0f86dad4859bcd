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


#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "support/oracles.hpp"
#include "tnpath/drivers.hpp"
#include "tnpath/error.hpp"
#include "tnpath/generators.hpp"
#include "tnpath/hypergraph.hpp"
#include "tnpath/tuner.hpp"

using namespace tnpath;

namespace {

bool in_bounds(const Suggestion& s, const SearchSpace& space) {
  for (const auto& d : space) {
    if (d.driver != s.driver) continue;
    if (s.params.size() != d.params.size()) return false;
    for (const auto& p : d.params) {
      const auto it = s.params.find(p.name);
      if (it == s.params.end() || it->second < p.lo || it->second > p.hi) return false;
      if (p.integer && it->second != std::round(it->second)) return false;
    }
    return true;
  }
  return false;
}

std::vector<TrialRecord> alpha_history() {
  // alpha near 1 scores 10 points better than alpha near 0.
  Rng rng(1);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05), tau(1e-3, 1.0), noise(0.0, 1.0);
  std::vector<TrialRecord> h;
  for (int i = 0; i < 50; ++i) {
    TrialRecord r;
    r.index = i;
    r.driver = "greedy";
    const bool good = i % 2 == 0;
    r.params = {{"alpha", (good ? 1.0 : 0.0) + std::abs(jitter(rng))}, {"tau", tau(rng)}};
    r.score = (good ? 10.0 : 20.0) + noise(rng);
    h.push_back(r);
  }
  return h;
}

SearchOptions quick(int budget, std::uint64_t seed) {
  SearchOptions o;
  o.budget = budget;
  o.seed = seed;
  return o;
}

}  // namespace

TEST(Suggest, ColdStartIsUniform) {
  const SearchSpace space = make_space({"greedy", "partition", "minfill"});
  Rng rng(2);
  std::map<std::string, int> counts;
  double alpha_sum = 0.0;
  for (int i = 0; i < 3000; ++i) {
    const Suggestion s = suggest({}, space, rng);
    ASSERT_TRUE(in_bounds(s, space));
    ++counts[s.driver];
    if (s.driver == "greedy") alpha_sum += s.params.at("alpha");
  }
  for (const auto& [d, c] : counts) EXPECT_NEAR(c, 1000, 100) << d;
  EXPECT_NEAR(alpha_sum / counts["greedy"], 1.0, 0.1);
}

TEST(Suggest, DeterministicGivenRngAndHistory) {
  const SearchSpace space = make_space({"greedy", "partition"});
  const auto h = alpha_history();
  Rng a(3), b(3);
  for (int i = 0; i < 20; ++i) {
    const Suggestion x = suggest(h, space, a);
    const Suggestion y = suggest(h, space, b);
    EXPECT_EQ(x.driver, y.driver);
    EXPECT_EQ(x.params, y.params);
  }
}

TEST(Suggest, GuidedPrefersGoodAlpha) {
  const SearchSpace space = make_space({"greedy"});
  const auto h = alpha_history();
  SuggestOptions o;
  o.p_explore = 0.0;
  Rng rng(4);
  int high = 0;
  for (int i = 0; i < 100; ++i) {
    const Suggestion s = suggest(h, space, rng, o);
    ASSERT_TRUE(in_bounds(s, space));
    high += s.params.at("alpha") > 0.5;
  }
  EXPECT_GE(high, 70);
}

TEST(Suggest, GuidedSamplesStayInBounds) {
  const SearchSpace space = make_space({"greedy", "gn", "partition", "minfill", "dp"});
  Rng rng(5);
  std::vector<TrialRecord> h;
  std::uniform_real_distribution<double> score(0.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const Suggestion s = suggest(h, space, rng);
    ASSERT_TRUE(in_bounds(s, space)) << i;
    h.push_back({i, s.driver, s.params, 0, score(rng), 0, 0, 0});
  }
}

TEST(Search, BudgetOneIsSingleDriverRun) {
  const TensorNetwork tn = random_regular(20, 3, 2, 6, false);
  const Hypergraph hg = Hypergraph::from_network(tn);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const PathReport r = search(hg, quick(1, seed));
    EXPECT_EQ(r.trials_run, 1);
    EXPECT_EQ(r.trial, 0);
    EXPECT_EQ(r.tree, run_driver(hg, r.driver, r.params, r.seed));
    EXPECT_EQ(r.score, metrics(r.tree, hg).log10_cost);
  }
}

TEST(Search, NearOptimalOnTenNodeNetworks) {
  int ok = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const TensorNetwork tn = random_regular(10, 3 + 2 * static_cast<int>(i % 2), 2 + i % 3, 100 + i, false);
    const Hypergraph hg = Hypergraph::from_network(tn);
    SearchOptions o = quick(64, i);
    o.drivers = {"greedy", "gn", "partition", "minfill"};
    const PathReport r = search(hg, o);
    const double opt = metrics(optimal_dp(hg, Target::kCost), hg).cost;
    EXPECT_GE(r.metrics.cost, opt);
    ok += r.metrics.cost <= 1.2 * opt;
  }
  EXPECT_GE(ok, 48);
}

TEST(Search, ReproducibleAndMonotone) {
  const TensorNetwork tn = random_regular(30, 3, 2, 7, false);
  const Hypergraph hg = Hypergraph::from_network(tn);
  for (int par : {1, 3}) {
    SearchOptions o = quick(24, 11);
    o.parallelism = par;
    std::vector<TrialRecord> trials_a, trials_b;
    o.on_trial = [&](const TrialRecord& t) { trials_a.push_back(t); };
    const PathReport a = search(hg, o);
    o.on_trial = [&](const TrialRecord& t) { trials_b.push_back(t); };
    const PathReport b = search(hg, o);
    EXPECT_EQ(a.tree, b.tree);
    EXPECT_EQ(a.driver, b.driver);
    EXPECT_EQ(a.params, b.params);
    EXPECT_EQ(a.best_so_far, b.best_so_far);
    ASSERT_EQ(trials_a.size(), trials_b.size());
    for (std::size_t k = 0; k < trials_a.size(); ++k) {
      EXPECT_EQ(trials_a[k].index, static_cast<int>(k));
      EXPECT_EQ(trials_a[k].params, trials_b[k].params);
      EXPECT_EQ(trials_a[k].seed, trials_b[k].seed);
      EXPECT_EQ(trials_a[k].score, trials_b[k].score);
    }
    ASSERT_EQ(a.best_so_far.size(), 24u);
    for (std::size_t k = 1; k < a.best_so_far.size(); ++k) {
      EXPECT_LE(a.best_so_far[k], a.best_so_far[k - 1]);
    }
    double best = INFINITY;
    for (const auto& t : trials_a) best = std::min(best, t.score);
    EXPECT_EQ(a.score, best);
  }
}

TEST(Search, ZeroBudgetIsUsageError) {
  const Hypergraph hg = Hypergraph::from_network(random_regular(10, 3, 2, 1, false));
  EXPECT_THROW(search(hg, quick(0, 0)), UsageError);
  SearchOptions o = quick(-1, 0);
  EXPECT_THROW(search(hg, o), UsageError);
}

TEST(Search, WidthObjective) {
  const TensorNetwork tn = square_lattice(4, Boundary::kOpen, LatticeForm::kVertex, 2, 0, false);
  const Hypergraph hg = Hypergraph::from_network(tn);
  SearchOptions o = quick(32, 3);
  o.objective = Objective::kWidth;
  const PathReport r = search(hg, o);
  EXPECT_EQ(r.score, r.metrics.width);
  EXPECT_GE(r.metrics.width, metrics(optimal_dp(hg, Target::kWidth), hg).width);
}

TEST(Search, SlicedObjective) {
  const TensorNetwork tn = random_regular(30, 3, 2, 8, false);
  const Hypergraph hg = Hypergraph::from_network(tn);
  SearchOptions o = quick(16, 4);
  o.objective = Objective::kSlicedCost;
  o.slice_width = 5.0;
  const PathReport r = search(hg, o);
  ASSERT_TRUE(r.sliced.has_value());
  EXPECT_LE(r.sliced->width, 5.0 + 1e-9);
  EXPECT_EQ(r.score, r.sliced->log10_cost);
  o.slice_width = 2.0;
  EXPECT_THROW(search(hg, o), InfeasibleError);
}

TEST(Search, SingleNodeNetwork) {
  const TensorNetwork tn = parse_einsum_spec("ab->", {{2, 3}});
  const PathReport r = search(Hypergraph::from_network(tn), quick(4, 0));
  EXPECT_EQ(r.tree.num_leaves(), 1);
  EXPECT_TRUE(r.tree.is_complete());
}

TEST(Search, HyperedgesSkipGn) {
  const TensorNetwork tn = square_lattice(3, Boundary::kOpen, LatticeForm::kHyperedge, 2, 0, false);
  SearchOptions o = quick(20, 5);
  o.drivers = {"gn", "greedy"};
  std::vector<std::string> seen;
  o.on_trial = [&](const TrialRecord& t) { seen.push_back(t.driver); };
  search(Hypergraph::from_network(tn), o);
  for (const auto& d : seen) EXPECT_EQ(d, "greedy");
}
