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


#include "tnpath/io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tnpath/error.hpp"

namespace tnpath {

namespace {

constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

static_assert(std::endian::native == std::endian::little, "little-endian host required");

std::string encode_data(const std::vector<Complex>& data) {
  std::string bytes(data.size() * sizeof(Complex), '\0');
  std::memcpy(bytes.data(), data.data(), bytes.size());
  return base64_encode(bytes);
}

std::vector<Complex> decode_data(const std::string& text) {
  const std::string bytes = base64_decode(text);
  if (bytes.size() % sizeof(Complex) != 0) {
    throw DataError("tensor data is not a whole number of complex128 values");
  }
  std::vector<Complex> data(bytes.size() / sizeof(Complex));
  std::memcpy(data.data(), bytes.data(), bytes.size());
  return data;
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

std::string base64_encode(std::string_view bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = static_cast<unsigned char>(bytes[i]) << 16 |
                            static_cast<unsigned char>(bytes[i + 1]) << 8 |
                            static_cast<unsigned char>(bytes[i + 2]);
    out += kAlphabet[v >> 18 & 63];
    out += kAlphabet[v >> 12 & 63];
    out += kAlphabet[v >> 6 & 63];
    out += kAlphabet[v & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest > 0) {
    std::uint32_t v = static_cast<unsigned char>(bytes[i]) << 16;
    if (rest == 2) v |= static_cast<unsigned char>(bytes[i + 1]) << 8;
    out += kAlphabet[v >> 18 & 63];
    out += kAlphabet[v >> 12 & 63];
    out += rest == 2 ? kAlphabet[v >> 6 & 63] : '=';
    out += '=';
  }
  return out;
}

std::string base64_decode(std::string_view text) {
  std::array<int, 256> lookup;
  lookup.fill(-1);
  for (int k = 0; k < 64; ++k) lookup[static_cast<unsigned char>(kAlphabet[k])] = k;
  std::string out;
  std::uint32_t acc = 0;
  int bits = 0;
  std::size_t padding = 0;
  for (char ch : text) {
    if (ch == '=') {
      ++padding;
      continue;
    }
    if (ch == '\n' || ch == '\r' || ch == ' ') continue;
    const int v = lookup[static_cast<unsigned char>(ch)];
    if (v < 0 || padding > 0) throw DataError("invalid base64 data");
    acc = acc << 6 | static_cast<std::uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out += static_cast<char>(acc >> bits & 0xff);
    }
  }
  if (padding > 2) throw DataError("invalid base64 padding");
  return out;
}

Json network_to_json(const TensorNetwork& tn) {
  Json j;
  j["indices"] = Json::object();
  for (const auto& [label, dim] : tn.index_dims) j["indices"][label] = dim;
  j["output"] = tn.output;
  j["tensors"] = Json::array();
  for (const auto& node : tn.nodes) {
    Json t;
    t["id"] = node.id;
    t["indices"] = node.indices;
    t["data"] = node.data ? Json(encode_data(*node.data)) : Json(nullptr);
    j["tensors"].push_back(std::move(t));
  }
  j["norm_exponent"] = tn.norm_exponent;
  return j;
}

TensorNetwork network_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw DataError("network must be a JSON object");
    TensorNetwork tn;
    const Json& indices = j.at("indices");
    if (!indices.is_object()) throw DataError("'indices' must be an object");
    for (const auto& [label, dim] : indices.items()) {
      if (!dim.is_number_integer()) throw DataError("dim of '" + label + "' is not an integer");
      tn.index_dims[label] = dim.get<std::int64_t>();
    }
    if (j.contains("output")) tn.output = j.at("output").get<std::vector<Label>>();
    const Json& tensors = j.at("tensors");
    if (!tensors.is_array()) throw DataError("'tensors' must be an array");
    for (const Json& t : tensors) {
      TensorNode node;
      if (!t.at("id").is_number_integer()) throw DataError("tensor id is not an integer");
      node.id = t.at("id").get<int>();
      node.indices = t.at("indices").get<std::vector<Label>>();
      if (t.contains("data") && !t.at("data").is_null()) {
        node.data = decode_data(t.at("data").get<std::string>());
      }
      tn.nodes.push_back(std::move(node));
    }
    if (j.contains("norm_exponent")) tn.norm_exponent = j.at("norm_exponent").get<double>();
    require_valid(tn);
    return tn;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed network JSON: ") + e.what());
  }
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << '\n';
}

TensorNetwork load_network(const std::string& path) { return network_from_json(read_json(path)); }

void save_network(const TensorNetwork& tn, const std::string& path) {
  write_json(network_to_json(tn), path);
}

Json path_to_json(const ContractionTree& tree, PathFormat format) {
  Json j;
  j["format"] = format == PathFormat::kLinear ? "linear" : "ssa";
  j["num_leaves"] = tree.num_leaves();
  Json steps = Json::array();
  const auto pairs = format == PathFormat::kLinear ? linear_from_tree(tree) : ssa_from_tree(tree);
  for (const auto& [a, b] : pairs) steps.push_back({a, b});
  j["path"] = std::move(steps);
  return j;
}

ContractionTree path_from_json(const Json& j, int num_leaves) {
  try {
    const std::string format = j.at("format").get<std::string>();
    std::vector<std::pair<int, int>> pairs;
    for (const Json& step : j.at("path")) {
      if (!step.is_array() || step.size() != 2) throw DataError("path steps must be pairs");
      pairs.emplace_back(step[0].get<int>(), step[1].get<int>());
    }
    if (j.contains("num_leaves") && j.at("num_leaves").get<int>() != num_leaves) {
      throw DataError("path is for " + std::to_string(j.at("num_leaves").get<int>()) +
                      " tensors, network has " + std::to_string(num_leaves));
    }
    if (format == "linear") return tree_from_linear(pairs, num_leaves);
    if (format == "ssa") return tree_from_ssa(pairs, num_leaves);
    throw DataError("unknown path format '" + format + "'");
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed path JSON: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("invalid path: ") + e.what());
  }
}

ContractionTree load_path(const std::string& path, int num_leaves) {
  return path_from_json(read_json(path), num_leaves);
}

Json slice_to_json(const SliceSet& s) {
  return {{"labels", s.labels},
          {"d", s.d_sliced},
          {"Ws", s.width},
          {"log10_Cs", finite_or_null(s.log10_cost)}};
}

Json metrics_to_json(const PathMetrics& m) {
  return {{"W", m.width},
          {"C", finite_or_null(m.cost)},
          {"log10_C", m.log10_cost},
          {"flops_real", finite_or_null(m.flops_real)},
          {"flops_complex", finite_or_null(m.flops_complex)},
          {"peak_memory_elements", m.peak_memory_elements}};
}

Json report_to_json(const PathReport& r) {
  Json j;
  j["driver"] = r.driver;
  j["params"] = r.params;
  j["seed"] = r.seed;
  j["trial"] = r.trial;
  j["trials_run"] = r.trials_run;
  j["score"] = finite_or_null(r.score);
  j["metrics"] = metrics_to_json(r.metrics);
  Json best = Json::array();
  for (double b : r.best_so_far) best.push_back(finite_or_null(b));
  j["best_so_far"] = std::move(best);
  j["path"] = path_to_json(r.tree);
  if (r.sliced) j["sliced"] = slice_to_json(*r.sliced);
  return j;
}

Json simplify_report_to_json(const SimplifyReport& r) {
  return {{"antidiagonal", r.antidiagonal},
          {"diagonal", r.diagonal},
          {"column", r.column},
          {"rank", r.rank},
          {"split", r.split},
          {"nodes_before", r.nodes_before},
          {"nodes_after", r.nodes_after},
          {"hyperedges_before", r.hyperedges_before},
          {"hyperedges_after", r.hyperedges_after},
          {"norm_exponent_delta", r.norm_exponent_delta},
          {"cycles", r.cycles}};
}

Json trial_to_json(const TrialRecord& t, bool with_timing) {
  Json j{{"index", t.index},
         {"driver", t.driver},
         {"params", t.params},
         {"seed", t.seed},
         {"score", finite_or_null(t.score)},
         {"W", t.width},
         {"log10_C", t.log10_cost}};
  if (with_timing) j["seconds"] = t.seconds;
  return j;
}

Json contract_result_to_json(const ContractResult& r) {
  Json value = Json::array();
  for (const Complex& z : r.value.data) value.push_back({z.real(), z.imag()});
  return {{"output", r.value.labels},
          {"shape", r.value.dims},
          {"value", std::move(value)},
          {"exponent10", r.exponent10},
          {"op_count", r.op_count},
          {"peak_elements", r.peak_elements}};
}

}  // namespace tnpath
