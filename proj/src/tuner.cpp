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

#include "tnpath/tuner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "tnpath/error.hpp"

namespace tnpath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double to_unit(const ParamSpec& p, double x) {
  if (p.integer) return (x - p.lo + 0.5) / (p.hi - p.lo + 1.0);
  if (p.hi <= p.lo) return 0.5;
  if (p.log_scale) return (std::log(x) - std::log(p.lo)) / (std::log(p.hi) - std::log(p.lo));
  return (x - p.lo) / (p.hi - p.lo);
}

double from_unit(const ParamSpec& p, double u) {
  u = std::clamp(u, 0.0, 1.0);
  if (p.integer) return std::clamp(std::floor(p.lo + u * (p.hi - p.lo + 1.0)), p.lo, p.hi);
  if (p.log_scale) return std::exp(std::log(p.lo) + u * (std::log(p.hi) - std::log(p.lo)));
  return p.lo + u * (p.hi - p.lo);
}

double bandwidth(std::size_t m) {
  return std::max(0.05, 0.5 * std::pow(static_cast<double>(std::max<std::size_t>(m, 1)), -0.2));
}

// Kernel density on [0, 1] with one uniform prior component.
double kde(double x, const std::vector<double>& obs) {
  const double h = bandwidth(obs.size());
  double s = 1.0;
  for (double mu : obs) {
    const double z = (x - mu) / h;
    s += std::exp(-0.5 * z * z) / (h * std::sqrt(2.0 * std::numbers::pi));
  }
  return s / (1.0 + static_cast<double>(obs.size()));
}

const DriverSpace* find_space(const SearchSpace& space, const std::string& driver) {
  for (const auto& d : space) {
    if (d.driver == driver) return &d;
  }
  return nullptr;
}

Suggestion uniform(const SearchSpace& space, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, space.size() - 1);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const DriverSpace& d = space[pick(rng)];
  Suggestion s{d.driver, {}};
  for (const auto& p : d.params) s.params[p.name] = from_unit(p, u01(rng));
  return s;
}

double param_or(const std::map<std::string, double>& p, const std::string& k, double dflt) {
  auto it = p.find(k);
  return it == p.end() ? dflt : it->second;
}

}  // namespace

DriverSpace driver_space(const std::string& driver) {
  if (driver == "greedy") {
    return {driver, {{"alpha", 0.0, 2.0, false, false}, {"tau", 1e-3, 1.0, true, false}}};
  }
  if (driver == "gn") return {driver, {{"weight_noise", 0.0, 1.0, false, false}}};
  if (driver == "partition") {
    return {driver,
            {{"parts", 2, 8, false, true},
             {"imbalance", 0.2, 1.0, true, false},
             {"cutoff", 2, 12, false, true},
             {"weight_noise", 0.0, 1.0, false, false}}};
  }
  if (driver == "minfill" || driver == "dp") return {driver, {}};
  throw UsageError("unknown driver " + driver);
}

std::vector<std::string> default_drivers(const Hypergraph& hg, int dp_limit) {
  std::vector<std::string> d{"greedy", "partition", "minfill"};
  if (!hg.has_hyperedges()) d.push_back("gn");
  if (hg.num_nodes() <= dp_limit) d.push_back("dp");
  return d;
}

SearchSpace make_space(const std::vector<std::string>& drivers) {
  SearchSpace s;
  for (const auto& d : drivers) s.push_back(driver_space(d));
  return s;
}

Suggestion suggest(const std::vector<TrialRecord>& history, const SearchSpace& space, Rng& rng,
                   const SuggestOptions& options) {
  if (space.empty()) throw UsageError("empty search space");
  std::vector<const TrialRecord*> finite;
  for (const auto& r : history) {
    if (std::isfinite(r.score) && find_space(space, r.driver)) finite.push_back(&r);
  }
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double coin = u01(rng);
  if (static_cast<int>(finite.size()) < std::max(options.startup, 2) || coin < options.p_explore) {
    return uniform(space, rng);
  }
  std::stable_sort(finite.begin(), finite.end(), [](const TrialRecord* a, const TrialRecord* b) {
    return a->score < b->score || (a->score == b->score && a->index < b->index);
  });
  const std::size_t n_good = std::max<std::size_t>(1, finite.size() / 2);
  const std::vector<const TrialRecord*> good(finite.begin(), finite.begin() + n_good);
  const std::vector<const TrialRecord*> rest(finite.begin() + n_good, finite.end());

  const double nd = static_cast<double>(space.size());
  auto cat = [&](const std::vector<const TrialRecord*>& set, const std::string& d) {
    double c = 0.0;
    for (const auto* r : set) c += r->driver == d ? 1.0 : 0.0;
    return (c + 1.0) / (static_cast<double>(set.size()) + nd);
  };
  auto obs = [&](const std::vector<const TrialRecord*>& set, const DriverSpace& d,
                 const ParamSpec& p) {
    std::vector<double> o;
    for (const auto* r : set) {
      if (r->driver == d.driver) o.push_back(to_unit(p, param_or(r->params, p.name, p.lo)));
    }
    return o;
  };

  std::vector<double> weights;
  for (const auto& d : space) weights.push_back(cat(good, d.driver));
  std::discrete_distribution<std::size_t> pick_driver(weights.begin(), weights.end());
  std::normal_distribution<double> normal(0.0, 1.0);

  Suggestion best;
  double best_score = -kInf;
  for (int c = 0; c < std::max(options.candidates, 1); ++c) {
    const DriverSpace& d = space[pick_driver(rng)];
    Suggestion s{d.driver, {}};
    double score = std::log(cat(good, d.driver)) - std::log(cat(rest, d.driver));
    for (const auto& p : d.params) {
      const auto og = obs(good, d, p);
      const auto ob = obs(rest, d, p);
      double u;
      if (og.empty() || u01(rng) < 1.0 / (static_cast<double>(og.size()) + 1.0)) {
        u = u01(rng);
      } else {
        std::uniform_int_distribution<std::size_t> pick(0, og.size() - 1);
        u = og[pick(rng)] + bandwidth(og.size()) * normal(rng);
        if (u < 0.0) u = -u;
        if (u > 1.0) u = 2.0 - u;
        u = std::clamp(u, 0.0, 1.0);
      }
      const double x = from_unit(p, u);
      s.params[p.name] = x;
      const double ux = to_unit(p, x);
      score += std::log(kde(ux, og)) - std::log(kde(ux, ob));
    }
    if (score > best_score) {
      best_score = score;
      best = std::move(s);
    }
  }
  return best;
}

ContractionTree run_driver(const Hypergraph& hg, const std::string& driver,
                           const std::map<std::string, double>& p, std::uint64_t seed,
                           Target dp_target) {
  if (driver == "greedy") {
    return greedy_sample(hg, {param_or(p, "alpha", 1.0), param_or(p, "tau", 0.0)}, seed);
  }
  if (driver == "gn") return girvan_newman_tree(hg, param_or(p, "weight_noise", 0.0), seed);
  if (driver == "partition") {
    PartitionParams pp;
    pp.parts = static_cast<int>(param_or(p, "parts", 2));
    pp.imbalance = param_or(p, "imbalance", 0.1);
    pp.cutoff = static_cast<int>(param_or(p, "cutoff", 8));
    pp.weight_noise = param_or(p, "weight_noise", 0.0);
    return partition_divide(hg, pp, seed);
  }
  if (driver == "minfill") return tree_from_edge_order(minfill_order(hg, seed), hg);
  if (driver == "dp") return optimal_dp(hg, dp_target);
  throw UsageError("unknown driver " + driver);
}

PathReport search(const Hypergraph& hg, const SearchOptions& o) {
  if (o.budget < 0 || o.seconds < 0.0 || (o.budget == 0 && o.seconds <= 0.0)) {
    throw UsageError("search needs a positive shot or time budget");
  }
  if (hg.num_nodes() == 0) throw UsageError("empty network");
  std::vector<std::string> drivers = o.drivers.empty() ? default_drivers(hg) : o.drivers;
  if (hg.has_hyperedges()) std::erase(drivers, std::string("gn"));
  if (drivers.empty()) throw UsageError("no driver applicable to this network");
  const SearchSpace space = make_space(drivers);
  if (o.objective == Objective::kSlicedCost && o.slice_width + 1e-9 < hg.max_leaf_log2()) {
    throw InfeasibleError("slice target below the largest input tensor");
  }
  const Target dp_target = o.objective == Objective::kWidth ? Target::kWidth : Target::kCost;

  Rng rng(derive_seed(o.seed, 0xffffffffffffULL));
  std::vector<TrialRecord> history;
  PathReport best;
  best.score = kInf;
  bool have_best = false;
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  struct Outcome {
    ContractionTree tree;
    PathMetrics metrics;
    std::optional<SliceSet> sliced;
    TrialRecord record;
  };

  int trial = 0;
  while ((o.budget <= 0 || trial < o.budget) && (o.seconds <= 0.0 || elapsed() < o.seconds)) {
    int batch = std::max(o.parallelism, 1);
    if (o.budget > 0) batch = std::min(batch, o.budget - trial);
    std::vector<Suggestion> sugg;
    for (int b = 0; b < batch; ++b) sugg.push_back(suggest(history, space, rng, o.suggest));
    std::vector<Outcome> out(batch);
    std::vector<std::exception_ptr> errs(batch);
    auto run = [&](int b) {
      try {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome& r = out[b];
        r.record.index = trial + b;
        r.record.driver = sugg[b].driver;
        r.record.params = sugg[b].params;
        r.record.seed = derive_seed(o.seed, static_cast<std::uint64_t>(trial + b));
        r.tree = run_driver(hg, r.record.driver, r.record.params, r.record.seed, dp_target);
        r.metrics = metrics(r.tree, hg);
        r.record.width = r.metrics.width;
        r.record.log10_cost = r.metrics.log10_cost;
        switch (o.objective) {
          case Objective::kWidth:
            r.record.score = r.metrics.width;
            break;
          case Objective::kCost:
            r.record.score = r.metrics.log10_cost;
            break;
          case Objective::kSlicedCost:
            try {
              r.sliced = greedy_slice(r.tree, hg, o.slice_width, o.slice_restarts,
                                      kDefaultSliceNoise, r.record.seed);
              r.record.score = r.sliced->log10_cost;
            } catch (const InfeasibleError&) {
              r.record.score = kInf;
            }
            break;
        }
        r.record.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      } catch (...) {
        errs[b] = std::current_exception();
      }
    };
    if (batch == 1) {
      run(0);
    } else {
      std::vector<std::thread> pool;
      for (int b = 0; b < batch; ++b) pool.emplace_back(run, b);
      for (auto& t : pool) t.join();
    }
    for (int b = 0; b < batch; ++b) {
      if (errs[b]) std::rethrow_exception(errs[b]);
      Outcome& r = out[b];
      if (r.record.score < best.score) {
        best.tree = std::move(r.tree);
        best.metrics = r.metrics;
        best.driver = r.record.driver;
        best.params = r.record.params;
        best.seed = r.record.seed;
        best.trial = r.record.index;
        best.score = r.record.score;
        best.sliced = r.sliced;
        have_best = true;
      }
      best.best_so_far.push_back(best.score);
      history.push_back(r.record);
      if (o.on_trial) o.on_trial(r.record);
    }
    trial += batch;
  }
  best.trials_run = trial;
  if (!have_best) {
    if (o.objective == Objective::kSlicedCost) {
      throw InfeasibleError("no trial reached the slice target");
    }
    throw UsageError("search budget ran out before any trial finished");
  }
  return best;
}

}  // namespace tnpath
