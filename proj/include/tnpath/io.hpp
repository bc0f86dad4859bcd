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

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tnpath/executor.hpp"
#include "tnpath/network.hpp"
#include "tnpath/simplify.hpp"
#include "tnpath/slicer.hpp"
#include "tnpath/tree.hpp"
#include "tnpath/tuner.hpp"

namespace tnpath {

using Json = nlohmann::json;

std::string base64_encode(std::string_view bytes);
/// Throws DataError on characters outside the standard alphabet.
std::string base64_decode(std::string_view text);

/// Interchange form: {"indices": {label: dim}, "output": [...],
/// "tensors": [{"id", "indices", "data"}], "norm_exponent"}. Data is base64
/// of little-endian complex128 in row-major order, or null.
Json network_to_json(const TensorNetwork& tn);
/// Throws DataError on schema violations, data length mismatches and any
/// validate() finding.
TensorNetwork network_from_json(const Json& j);

TensorNetwork load_network(const std::string& path);
void save_network(const TensorNetwork& tn, const std::string& path);

enum class PathFormat { kLinear, kSsa };

Json path_to_json(const ContractionTree& tree, PathFormat format = PathFormat::kSsa);
ContractionTree path_from_json(const Json& j, int num_leaves);
ContractionTree load_path(const std::string& path, int num_leaves);

Json slice_to_json(const SliceSet& s);
Json metrics_to_json(const PathMetrics& m);
/// Timing-free, so equal searches serialize to identical bytes.
Json report_to_json(const PathReport& r);
Json simplify_report_to_json(const SimplifyReport& r);
/// One trial-log line; seconds are included only when `with_timing` is set.
Json trial_to_json(const TrialRecord& t, bool with_timing = true);
/// Value entries as [re, im] pairs in output order.
Json contract_result_to_json(const ContractResult& r);

Json read_json(const std::string& path);
/// Pretty-printed with a trailing newline.
void write_json(const Json& j, const std::string& path);

}  // namespace tnpath
