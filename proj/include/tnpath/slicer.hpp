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
#include <span>
#include <vector>

#include "tnpath/tree.hpp"

namespace tnpath {

struct SliceSet {
  std::vector<Label> labels;
  /// Number of independent slices, the product of the sliced dims.
  double d_sliced = 1.0;
  /// Per-slice width W_s.
  double width = 0.0;
  /// Total cost C_s over all slices, and its log10.
  double cost = 0.0;
  double log10_cost = 0.0;
};

/// Width and total cost with `labels` deleted from every incidence set.
/// Throws UsageError for unknown or output labels.
SliceSet sliced_metrics(const ContractionTree& tree, const Hypergraph& hg,
                        std::span<const Label> labels);

inline constexpr int kDefaultSliceRestarts = 8;
inline constexpr double kDefaultSliceNoise = 0.1;

/// Greedily slices labels found in width-achieving vertices, each step taking
/// the candidate with the smallest (noise-perturbed) C_s, until W_s <=
/// target_width. The first restart is noise-free; the best of all restarts
/// is returned. Throws InfeasibleError when the target is below the largest
/// leaf tensor or no further candidate exists.
SliceSet greedy_slice(const ContractionTree& tree, const Hypergraph& hg, double target_width,
                      int restarts = kDefaultSliceRestarts, double noise = kDefaultSliceNoise,
                      std::uint64_t seed = 0);

}  // namespace tnpath
