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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tnpath/drivers.hpp"
#include "tnpath/rng.hpp"
#include "tnpath/slicer.hpp"
#include "tnpath/tree.hpp"

namespace tnpath {

enum class Objective { kWidth, kCost, kSlicedCost };

/// Driver ids: "greedy", "gn", "partition", "minfill", "dp".
struct ParamSpec {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  bool log_scale = false;
  bool integer = false;
};

struct DriverSpace {
  std::string driver;
  std::vector<ParamSpec> params;
};

using SearchSpace = std::vector<DriverSpace>;

/// The parameter ranges of a driver.
DriverSpace driver_space(const std::string& driver);

/// Default drivers for a network: greedy, partition and minfill always; gn
/// when there are no hyperedges; dp when the node count is at most
/// `dp_limit`.
std::vector<std::string> default_drivers(const Hypergraph& hg, int dp_limit = 16);

SearchSpace make_space(const std::vector<std::string>& drivers);

struct TrialRecord {
  int index = 0;
  std::string driver;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
  /// W (log2), log10 C or log10 C_s depending on the objective; +inf when
  /// the trial could not meet a slicing target.
  double score = 0.0;
  double width = 0.0;
  double log10_cost = 0.0;
  double seconds = 0.0;
};

struct Suggestion {
  std::string driver;
  std::map<std::string, double> params;
};

struct SuggestOptions {
  double p_explore = 0.25;
  /// Uniform samples until this many finite scores exist.
  int startup = 8;
  int candidates = 24;
};

/// Density-ratio suggestion: with probability p_explore (or during startup)
/// a uniform sample, otherwise the candidate drawn from the kernel density
/// of the better half of the history that maximizes good/rest density.
Suggestion suggest(const std::vector<TrialRecord>& history, const SearchSpace& space, Rng& rng,
                   const SuggestOptions& options = {});

struct SearchOptions {
  Objective objective = Objective::kCost;
  /// Slicing target for kSlicedCost.
  double slice_width = 0.0;
  int slice_restarts = 4;
  /// Trials to run; at least one of budget and seconds must be positive.
  int budget = 64;
  double seconds = 0.0;
  int parallelism = 1;
  std::uint64_t seed = 0;
  /// Empty means default_drivers.
  std::vector<std::string> drivers;
  SuggestOptions suggest;
  /// Called once per finished trial, in trial order.
  std::function<void(const TrialRecord&)> on_trial;
};

struct PathReport {
  ContractionTree tree;
  PathMetrics metrics;
  std::string driver;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
  int trial = 0;
  int trials_run = 0;
  double score = 0.0;
  std::optional<SliceSet> sliced;
  std::vector<double> best_so_far;
};

/// Runs one driver with the given parameters.
ContractionTree run_driver(const Hypergraph& hg, const std::string& driver,
                           const std::map<std::string, double>& params, std::uint64_t seed,
                           Target dp_target = Target::kCost);

/// Any-time search. Trials run in synchronous batches of `parallelism`, so
/// the set of (seed, params) is independent of thread timing. Throws
/// UsageError on an empty budget and InfeasibleError if no trial meets the
/// slicing target.
PathReport search(const Hypergraph& hg, const SearchOptions& options);

}  // namespace tnpath
