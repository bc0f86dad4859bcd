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

#include <cstdio>
#include <filesystem>

#include "support/oracles.hpp"
#include "tnpath/error.hpp"
#include "tnpath/generators.hpp"
#include "tnpath/io.hpp"
#include "tnpath/network.hpp"

using namespace tnpath;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("tnpath_test_" + name)).string();
}

}  // namespace

TEST(Einsum, MatrixProduct) {
  const TensorNetwork tn = parse_einsum_spec("ab,bc->ac", {{2, 4}, {4, 8}});
  ASSERT_EQ(tn.nodes.size(), 2u);
  EXPECT_EQ(tn.dim("a"), 2);
  EXPECT_EQ(tn.dim("b"), 4);
  EXPECT_EQ(tn.dim("c"), 8);
  EXPECT_EQ(tn.output, (std::vector<Label>{"a", "c"}));
  EXPECT_TRUE(tn.hyperedges().empty());
}

TEST(Einsum, Hyperedge) {
  const TensorNetwork tn = parse_einsum_spec("a,a,a->", {{3}, {3}, {3}});
  EXPECT_EQ(tn.nodes.size(), 3u);
  EXPECT_EQ(tn.hyperedges(), (std::vector<Label>{"a"}));
  EXPECT_TRUE(tn.output.empty());
}

TEST(Einsum, DimMismatch) {
  EXPECT_THROW(parse_einsum_spec("ab,bc->ac", {{2, 4}, {5, 8}}), Error);
}

TEST(Einsum, Errors) {
  EXPECT_THROW(parse_einsum_spec("ab,bc->z", {{2, 4}, {4, 8}}), Error);
  EXPECT_THROW(parse_einsum_spec("a[b,b->", {{2, 4}, {4}}), Error);
  EXPECT_THROW(parse_einsum_spec("aa->", {{2, 2}}), Error);
  EXPECT_THROW(parse_einsum_spec("ab->", {{2}}), Error);
}

TEST(Einsum, BracketedLabels) {
  const TensorNetwork tn = parse_einsum_spec("[q17_t3]b,b->[q17_t3]", {{2, 3}, {3}});
  EXPECT_EQ(tn.nodes[0].indices, (std::vector<Label>{"q17_t3", "b"}));
  EXPECT_EQ(tn.output, (std::vector<Label>{"q17_t3"}));
}

TEST(Validate, WellFormed) {
  EXPECT_TRUE(validate(random_regular(10, 3, 2, 1)).empty());
}

TEST(Validate, UnknownIndex) {
  TensorNetwork tn = parse_einsum_spec("ab,bc->ac", {{2, 4}, {4, 8}});
  tn.nodes.push_back({3, {"z"}, std::nullopt});
  EXPECT_EQ(validate(tn), (std::vector<std::string>{"unknown index z@node3"}));
}

TEST(Validate, ShapeViolation) {
  TensorNetwork tn;
  tn.index_dims = {{"a", 3}, {"b", 2}};
  tn.nodes.push_back({0, {"a", "b"}, std::vector<Complex>(5, 1.0)});
  EXPECT_FALSE(validate(tn).empty());
}

TEST(Io, MinimalScalar) {
  const Json j = Json::parse(R"({"indices": {}, "output": [], "tensors": [{"id": 0, "indices": [], "data": null}], "norm_exponent": 0})");
  const TensorNetwork tn = network_from_json(j);
  EXPECT_EQ(tn.nodes.size(), 1u);
  EXPECT_TRUE(tn.output.empty());
}

TEST(Io, DataLengthMismatch) {
  TensorNetwork tn;
  tn.index_dims = {{"a", 2}};
  tn.nodes.push_back({0, {"a"}, std::vector<Complex>{1.0, 2.0}});
  Json j = network_to_json(tn);
  j["tensors"][0]["data"] = base64_encode(std::string(48, '\0'));
  EXPECT_THROW(network_from_json(j), DataError);
  j["tensors"][0]["data"] = "!!!";
  EXPECT_THROW(network_from_json(j), DataError);
  j = network_to_json(tn);
  j.erase("tensors");
  EXPECT_THROW(network_from_json(j), DataError);
}

TEST(Io, Base64RoundTrip) {
  for (int len = 0; len < 20; ++len) {
    std::string s;
    for (int i = 0; i < len; ++i) s += static_cast<char>(i * 37 + 11);
    EXPECT_EQ(base64_decode(base64_encode(s)), s);
  }
  EXPECT_EQ(base64_encode("Man"), "TWFu");
  EXPECT_EQ(base64_encode("Ma"), "TWE=");
}

TEST(Io, SaveLoadRoundTrip) {
  const TensorNetwork tn = random_regular(10, 3, 3, 42);
  const std::string p = temp_path("roundtrip.json");
  save_network(tn, p);
  const TensorNetwork back = load_network(p);
  std::remove(p.c_str());
  EXPECT_EQ(canonicalize(back), canonicalize(tn));
}

TEST(Io, RoundTripGenerators) {
  std::vector<TensorNetwork> nets{
      random_planar(12, 2, 3),
      square_lattice(3, Boundary::kPeriodic, LatticeForm::kHyperedge, 2, 1),
      grid_circuit(2, 3, 4, 5).network(),
  };
  Rng rng(3);
  nets.push_back(oracle::random_network(rng));
  for (const auto& tn : nets) {
    const TensorNetwork back = network_from_json(Json::parse(network_to_json(tn).dump()));
    EXPECT_EQ(back.nodes.size(), tn.nodes.size());
    EXPECT_EQ(back.index_dims, tn.index_dims);
    EXPECT_EQ(back.output, tn.output);
    EXPECT_EQ(canonicalize(back), canonicalize(tn));
  }
}

TEST(Io, PathRoundTrip) {
  ContractionTree t(4);
  const int a = t.merge(2, 3);
  const int b = t.merge(0, a);
  t.merge(b, 1);
  for (auto fmt : {PathFormat::kLinear, PathFormat::kSsa}) {
    EXPECT_EQ(path_from_json(path_to_json(t, fmt), 4), t);
  }
  Json bad = path_to_json(t, PathFormat::kSsa);
  bad["format"] = "other";
  EXPECT_THROW(path_from_json(bad, 4), DataError);
}

TEST(Network, Hyperedges) {
  const TensorNetwork tn = parse_einsum_spec("ab,bc,b->b", {{2, 2}, {2, 2}, {2}});
  EXPECT_EQ(tn.hyperedges(), (std::vector<Label>{"b"}));
  EXPECT_EQ(tn.num_shared_labels(), 1);
}
