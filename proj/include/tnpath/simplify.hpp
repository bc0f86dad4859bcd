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
#include <set>

#include "tnpath/network.hpp"

namespace tnpath {

struct SimplifyOptions {
  double rel_tol = kDefaultRelTol;
  /// Skip diagonal reduction, e.g. for drivers that reject hyperedges.
  bool diagonal = true;
  /// Ids of nodes that no pass may modify. Transformations that would touch
  /// a frozen node are skipped, so the structure around them is kept.
  std::set<int> frozen;
  int max_cycles = 1000;
  /// Nodes larger than this are not considered for splitting.
  std::int64_t split_max_size = 4096;
  /// Tensors whose max-abs leaves [1/renorm_bound, renorm_bound] are rescaled
  /// to unit max-abs, the factor moving into norm_exponent.
  double renorm_bound = 1e6;
};

struct SimplifyReport {
  int antidiagonal = 0;
  int diagonal = 0;
  int column = 0;
  int rank = 0;
  int split = 0;
  int nodes_before = 0;
  int nodes_after = 0;
  int hyperedges_before = 0;
  int hyperedges_after = 0;
  double norm_exponent_delta = 0.0;
  int cycles = 0;

  int total() const { return antidiagonal + diagonal + column + rank + split; }
};

// Each pass edits `tn` in place and returns how many transformations it made.
// Nodes are scanned by ascending id.

/// Flips one index of every antidiagonal axis pair on all its carriers.
int antidiagonal_gauge(TensorNetwork& tn, const SimplifyOptions& options = {});
/// Replaces diagonal axis pairs by their diagonal and merges the two labels.
int diagonal_reduce(TensorNetwork& tn, const SimplifyOptions& options = {});
/// Projects indices with a single nonzero column onto that column.
int column_reduce(TensorNetwork& tn, const SimplifyOptions& options = {});
/// Contracts neighbors whenever the result's rank does not exceed the larger
/// input rank; absorbs scalars into the lowest-id remaining node.
int rank_simplify(TensorNetwork& tn, const SimplifyOptions& options = {});
/// Applies the most size-reducing exact low-rank split of each node.
int split_simplify(TensorNetwork& tn, const SimplifyOptions& options = {});

/// Rescales out-of-range tensors into norm_exponent; returns the count.
int renormalize(TensorNetwork& tn, const SimplifyOptions& options = {});

/// Cycles antidiagonal, diagonal, column, rank, split until a full cycle
/// changes nothing. Throws NumericError after max_cycles.
TensorNetwork simplify_fixed_point(TensorNetwork tn, const SimplifyOptions& options = {},
                                   SimplifyReport* report = nullptr);

}  // namespace tnpath
