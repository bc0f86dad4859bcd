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
#include <map>
#include <span>
#include <vector>

#include "tnpath/dense.hpp"
#include "tnpath/network.hpp"
#include "tnpath/tree.hpp"

namespace tnpath {

struct ContractOptions {
  /// Rescale every intermediate by a power of two and track the exponent.
  bool strip_exponent = false;
  /// Worker threads for sliced contraction.
  int parallelism = 1;
};

struct ContractResult {
  /// Output tensor with axes in network output order (rank 0 for a scalar).
  DenseTensor value;
  /// The network value is value * 10^exponent10 (includes tn.norm_exponent).
  double exponent10 = 0.0;
  /// Multiply-accumulate count over all pairwise contractions.
  double op_count = 0.0;
  /// Element count of the largest intermediate seen (per slice).
  std::int64_t peak_elements = 0;
};

/// Contracts along `tree`, summing each index at the vertex where it leaves
/// the incidence sets. Throws DataError when data is missing and
/// NumericError on non-finite intermediates.
ContractResult contract(const TensorNetwork& tn, const ContractionTree& tree,
                        const ContractOptions& options = {});

/// Sum over every assignment of the sliced labels of the per-slice
/// contraction. Slices are dispatched to `options.parallelism` workers and
/// reduced in assignment order with compensated summation.
ContractResult contract_sliced(const TensorNetwork& tn, const ContractionTree& tree,
                               std::span<const Label> sliced,
                               const ContractOptions& options = {});

/// Fixes each given label to a value on every node carrying it; the labels
/// are removed from the network (and from the output, if present).
TensorNetwork fix_labels(const TensorNetwork& tn, const std::map<Label, std::int64_t>& values);

/// Projects the output legs onto the computational basis state `bits`
/// (one entry per output label) and closes the output. The structure does
/// not depend on `bits`, so one tree serves every bitstring.
TensorNetwork project_outputs(const TensorNetwork& tn, std::span<const int> bits);

/// <bits| network value, contracted along `tree` (built for
/// project_outputs(tn, ...)). Throws UsageError on a length mismatch.
Complex amplitude(const TensorNetwork& tn, const ContractionTree& tree, std::span<const int> bits);

}  // namespace tnpath
