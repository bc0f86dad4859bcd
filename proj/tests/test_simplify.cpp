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
#include <set>

#include "support/oracles.hpp"
#include "tnpath/drivers.hpp"
#include "tnpath/error.hpp"
#include "tnpath/executor.hpp"
#include "tnpath/generators.hpp"
#include "tnpath/simplify.hpp"

using namespace tnpath;

namespace {

std::vector<Complex> value(const TensorNetwork& tn) {
  DenseTensor t = oracle::nested_sum(tn);
  const double s = std::pow(10.0, tn.norm_exponent);
  for (auto& z : t.data) z *= s;
  return t.data;
}

double rel_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return INFINITY;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

TensorNetwork with_random_data(TensorNetwork tn, std::uint64_t seed) {
  Rng rng(seed);
  oracle::fill_random(tn, rng);
  return tn;
}

void set_data(TensorNetwork& tn, int pos, std::vector<Complex> d) { tn.nodes[pos].data = std::move(d); }

const TensorNode* node_with_id(const TensorNetwork& tn, int id) {
  const int p = tn.position_of(id);
  return p < 0 ? nullptr : &tn.nodes[p];
}

}  // namespace

TEST(DiagonalReduce, CzBecomesRankTwoOnHyperedges) {
  TensorNetwork tn = with_random_data(parse_einsum_spec("a,b,cdab,c,d->", {{2}, {2}, {2, 2, 2, 2}, {2}, {2}}), 1);
  const Gate2 cz = gate_cz();
  set_data(tn, 2, {cz.begin(), cz.end()});
  const auto before = value(tn);
  EXPECT_EQ(diagonal_reduce(tn), 2);
  const TensorNode* n = node_with_id(tn, 2);
  ASSERT_NE(n, nullptr);
  ASSERT_EQ(n->indices.size(), 2u);
  EXPECT_EQ(*n->data, (std::vector<Complex>{1, 1, 1, -1}));
  EXPECT_EQ(tn.hyperedges().size(), 2u);
  EXPECT_LT(rel_diff(value(tn), before), 1e-12);
}

TEST(DiagonalReduce, ZGateMergesWireLabels) {
  TensorNetwork tn = with_random_data(parse_einsum_spec("a,ba,b->", {{2}, {2, 2}, {2}}), 2);
  set_data(tn, 1, {1, 0, 0, -1});
  const auto before = value(tn);
  EXPECT_EQ(diagonal_reduce(tn), 1);
  EXPECT_EQ(tn.nodes[1].indices.size(), 1u);
  EXPECT_EQ(*tn.nodes[1].data, (std::vector<Complex>{1, -1}));
  EXPECT_EQ(tn.index_dims.size(), 1u);
  EXPECT_LT(rel_diff(value(tn), before), 1e-12);
}

TEST(DiagonalReduce, DenseUnchanged) {
  TensorNetwork tn = with_random_data(parse_einsum_spec("ab,bc,ca->", {{3, 3}, {3, 3}, {3, 3}}), 3);
  const TensorNetwork copy = tn;
  EXPECT_EQ(diagonal_reduce(tn), 0);
  EXPECT_EQ(tn, copy);
}

TEST(DiagonalReduce, BothOutputsSkipped) {
  TensorNetwork tn = parse_einsum_spec("ab->ab", {{2, 2}});
  set_data(tn, 0, {1, 0, 0, 1});
  EXPECT_EQ(diagonal_reduce(tn), 0);
}

TEST(AntidiagonalGauge, XBecomesDiagonal) {
  TensorNetwork tn = with_random_data(parse_einsum_spec("apq,ba,bpq->", {{2, 2, 2}, {2, 2}, {2, 2, 2}}), 4);
  set_data(tn, 1, {0, 1, 1, 0});
  const auto before = value(tn);
  EXPECT_EQ(antidiagonal_gauge(tn), 1);
  EXPECT_EQ(*tn.nodes[1].data, (std::vector<Complex>{1, 0, 0, 1}));
  EXPECT_LT(rel_diff(value(tn), before), 1e-12);
}

TEST(AntidiagonalGauge, TwoXGatesRemoved) {
  TensorNetwork tn =
      with_random_data(parse_einsum_spec("apq,ba,cb,cpq->", {{2, 2, 2}, {2, 2}, {2, 2}, {2, 2, 2}}), 5);
  set_data(tn, 1, {0, 1, 1, 0});
  set_data(tn, 2, {0, 1, 1, 0});
  const auto before = value(tn);
  SimplifyReport rep;
  const TensorNetwork s = simplify_fixed_point(tn, {}, &rep);
  EXPECT_GE(rep.antidiagonal, 1);
  EXPECT_GE(rep.diagonal, 1);
  EXPECT_EQ(node_with_id(s, 1), nullptr);
  EXPECT_EQ(node_with_id(s, 2), nullptr);
  EXPECT_LT(rel_diff(value(s), before), 1e-12);
}

TEST(AntidiagonalGauge, NothingToGauge) {
  TensorNetwork tn = with_random_data(parse_einsum_spec("ab,bc,ca->", {{2, 2}, {2, 2}, {2, 2}}), 6);
  const TensorNetwork copy = tn;
  EXPECT_EQ(antidiagonal_gauge(tn), 0);
  EXPECT_EQ(tn, copy);
}

TEST(ColumnReduce, ZeroStateSlicesGate) {
  TensorNetwork tn = with_random_data(parse_einsum_spec("a,ba,b->", {{2}, {2, 2}, {2}}), 7);
  set_data(tn, 0, {1, 0});
  const std::vector<Complex> h = tn.nodes[1].data.value();
  const auto before = value(tn);
  EXPECT_GE(column_reduce(tn), 1);
  EXPECT_FALSE(tn.index_dims.count("a"));
  const TensorNode* gate = node_with_id(tn, 1);
  ASSERT_NE(gate, nullptr);
  EXPECT_EQ(*gate->data, (std::vector<Complex>{h[0], h[2]}));
  EXPECT_LT(rel_diff(value(tn), before), 1e-12);
}

TEST(ColumnReduce, AllZeroCarrierGivesZero) {
  TensorNetwork tn = with_random_data(parse_einsum_spec("ab,bc,ca->", {{2, 2}, {2, 2}, {2, 2}}), 8);
  set_data(tn, 1, {0, 0, 0, 0});
  EXPECT_GE(column_reduce(tn), 1);
  EXPECT_EQ(oracle::closed_value(tn), Complex(0.0));
}

TEST(ColumnReduce, DenseUnchanged) {
  TensorNetwork tn = with_random_data(parse_einsum_spec("ab,bc,ca->", {{2, 2}, {2, 2}, {2, 2}}), 9);
  const TensorNetwork copy = tn;
  EXPECT_EQ(column_reduce(tn), 0);
  EXPECT_EQ(tn, copy);
}

TEST(RankSimplify, ChainToScalar) {
  TensorNetwork tn = with_random_data(parse_einsum_spec("a,ab,bc,c->", {{3}, {3, 4}, {4, 2}, {2}}), 10);
  const auto before = value(tn);
  rank_simplify(tn);
  ASSERT_EQ(tn.nodes.size(), 1u);
  EXPECT_TRUE(tn.nodes[0].indices.empty());
  EXPECT_LT(rel_diff(value(tn), before), 1e-12);
}

TEST(RankSimplify, StarToScalar) {
  TensorNetwork tn = with_random_data(parse_einsum_spec("abc,a,b,c->", {{2, 3, 4}, {2}, {3}, {4}}), 11);
  const auto before = value(tn);
  rank_simplify(tn);
  ASSERT_EQ(tn.nodes.size(), 1u);
  EXPECT_TRUE(tn.nodes[0].indices.empty());
  EXPECT_LT(rel_diff(value(tn), before), 1e-12);
}

TEST(RankSimplify, RegularGraphUnchanged) {
  TensorNetwork tn = random_regular(10, 3, 2, 12);
  const TensorNetwork copy = tn;
  EXPECT_EQ(rank_simplify(tn), 0);
  EXPECT_EQ(tn, copy);
}

TEST(RankSimplify, StructureOnly) {
  TensorNetwork tn = parse_einsum_spec("a,ab,bc,c->", {{3}, {3, 4}, {4, 2}, {2}});
  rank_simplify(tn);
  ASSERT_EQ(tn.nodes.size(), 1u);
  EXPECT_FALSE(tn.nodes[0].data.has_value());
}

TEST(SplitSimplify, RankOneMatrix) {
  TensorNetwork tn = parse_einsum_spec("ab->ab", {{4, 4}});
  std::vector<Complex> m(16);
  const Complex u[4] = {1.0, {0.0, 2.0}, -1.0, 0.5};
  const Complex v[4] = {0.3, 1.0, {1.0, 1.0}, -2.0};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m[i * 4 + j] = u[i] * v[j];
  }
  set_data(tn, 0, m);
  const auto before = value(tn);
  EXPECT_EQ(split_simplify(tn), 1);
  ASSERT_EQ(tn.nodes.size(), 2u);
  for (const auto& n : tn.nodes) EXPECT_EQ(n.indices.size(), 2u);
  EXPECT_EQ(tn.num_shared_labels(), 1);
  for (const auto& [l, d] : tn.index_dims) {
    if (l != "a" && l != "b") EXPECT_EQ(d, 1);
  }
  EXPECT_LT(rel_diff(value(tn), before), 1e-12);
}

TEST(SplitSimplify, IswapSwapGrouping) {
  // Node axes (oa, ob, ia, ib).
  TensorNetwork tn = parse_einsum_spec("abcd->abcd", {{2, 2, 2, 2}});
  const Gate2 g = gate_iswap();
  set_data(tn, 0, {g.begin(), g.end()});
  const auto before = value(tn);

  // Independent rank of each two-two grouping.
  auto grouping_rank = [&](int x, int y) {
    std::vector<Complex> m(16);
    int rest[2], k = 0;
    for (int a = 0; a < 4; ++a) {
      if (a != x && a != y) rest[k++] = a;
    }
    for (int i = 0; i < 16; ++i) {
      int idx[4];
      for (int a = 0; a < 4; ++a) idx[a] = i >> (3 - a) & 1;
      const int row = idx[x] * 2 + idx[y];
      const int col = idx[rest[0]] * 2 + idx[rest[1]];
      m[row * 4 + col] = g[i];
    }
    return oracle::matrix_rank(m, 4, 4);
  };
  EXPECT_EQ(grouping_rank(0, 2), 4);  // {oa, ia}
  EXPECT_EQ(grouping_rank(0, 3), 2);  // {oa, ib}

  EXPECT_EQ(split_simplify(tn), 1);
  ASSERT_EQ(tn.nodes.size(), 2u);
  std::set<std::set<Label>> sides;
  for (const auto& n : tn.nodes) {
    std::set<Label> s;
    for (const auto& l : n.indices) {
      if (l.size() == 1) s.insert(l);
    }
    sides.insert(s);
  }
  EXPECT_EQ(sides, (std::set<std::set<Label>>{{"a", "d"}, {"b", "c"}}));
  for (const auto& [l, d] : tn.index_dims) {
    if (l.size() > 1) EXPECT_EQ(d, 2);
  }
  EXPECT_LT(rel_diff(value(tn), before), 1e-12);
}

TEST(SplitSimplify, FullRankUnchanged) {
  TensorNetwork tn = with_random_data(parse_einsum_spec("abc->abc", {{2, 2, 2}}), 13);
  const TensorNetwork copy = tn;
  EXPECT_EQ(split_simplify(tn), 0);
  EXPECT_EQ(tn, copy);
}

TEST(FixedPoint, CzCircuitGainsHyperedges) {
  const CircuitBuilder c = grid_circuit(3, 3, 4, 14);
  const TensorNetwork tn = c.network();
  SimplifyReport rep;
  const TensorNetwork s = simplify_fixed_point(tn, {}, &rep);
  EXPECT_GT(s.hyperedges().size(), 0u);
  EXPECT_LT(s.num_shared_labels(), tn.num_shared_labels());
  EXPECT_GT(rep.diagonal, 0);
  EXPECT_EQ(rep.nodes_before, static_cast<int>(tn.nodes.size()));
  EXPECT_EQ(rep.nodes_after, static_cast<int>(s.nodes.size()));
}

TEST(FixedPoint, SmallCircuitMatchesStatevector) {
  const CircuitBuilder c = grid_circuit(2, 2, 3, 21);
  const TensorNetwork s = simplify_fixed_point(c.network());
  EXPECT_LT(rel_diff(value(s), oracle::statevector(4, c.gates())), 1e-10);
}

TEST(FixedPoint, Idempotent) {
  const TensorNetwork tn = grid_circuit(3, 3, 5, 15).network();
  const TensorNetwork once = simplify_fixed_point(tn);
  SimplifyReport rep;
  const TensorNetwork twice = simplify_fixed_point(once, {}, &rep);
  EXPECT_EQ(rep.total(), 0);
  EXPECT_EQ(rep.cycles, 1);
  EXPECT_EQ(twice, once);
}

TEST(FixedPoint, WmcValuePreserved) {
  Rng rng(16);
  std::uniform_int_distribution<int> var(1, 20), sign(0, 1);
  std::uniform_real_distribution<double> w(0.1, 1.0);
  CnfFormula f;
  f.num_vars = 20;
  for (int c = 0; c < 40; ++c) {
    std::vector<int> clause;
    for (int k = 0; k < 3; ++k) clause.push_back(sign(rng) ? var(rng) : -var(rng));
    f.clauses.push_back(clause);
  }
  for (int v = 1; v <= 20; ++v) {
    f.weights[v] = w(rng);
    f.weights[-v] = w(rng);
  }
  const double expected = oracle::brute_force_wmc(f);
  const TensorNetwork s = simplify_fixed_point(wmc_network(f));
  const Hypergraph hg = Hypergraph::from_network(s);
  const ContractResult r = contract(s, greedy_sample(hg, {}, 0));
  const Complex got = r.value.data.at(0) * std::pow(10.0, r.exponent10);
  EXPECT_NEAR(got.real(), expected, 1e-9 * std::abs(expected));
  EXPECT_NEAR(got.imag(), 0.0, 1e-9 * std::abs(expected));
}

TEST(FixedPoint, RenormalizesLargeTensors) {
  TensorNetwork tn = parse_einsum_spec("ab,bc,ca->", {{2, 2}, {2, 2}, {2, 2}});
  Rng rng(17);
  oracle::fill_random(tn, rng);
  for (auto& z : *tn.nodes[0].data) z *= 1e9;
  const Complex before = oracle::closed_value(tn);
  SimplifyOptions o;
  o.max_cycles = 50;
  const TensorNetwork s = simplify_fixed_point(tn, o);
  for (const auto& n : s.nodes) {
    for (const auto& z : *n.data) EXPECT_LE(std::abs(z), 1e6);
  }
  EXPECT_TRUE(oracle::close(oracle::closed_value(s), before, 1e-10));
}

TEST(FixedPoint, FrozenNodesUntouched) {
  TensorNetwork tn = with_random_data(parse_einsum_spec("a,ab,bc,c->", {{3}, {3, 4}, {4, 2}, {2}}), 18);
  SimplifyOptions o;
  o.frozen = {1, 2};
  const TensorNetwork s = simplify_fixed_point(tn, o);
  ASSERT_NE(node_with_id(s, 1), nullptr);
  ASSERT_NE(node_with_id(s, 2), nullptr);
  EXPECT_EQ(*node_with_id(s, 1), tn.nodes[1]);
  EXPECT_EQ(*node_with_id(s, 2), tn.nodes[2]);
  EXPECT_TRUE(oracle::close(oracle::closed_value(s), oracle::closed_value(tn), 1e-10));
}

// Every pass and the fixed point keep the value of random networks.
TEST(SimplifyProperty, ValuePreservedOnRandomNetworks) {
  Rng rng(19);
  oracle::RandomNetworkOptions opts;
  opts.max_state_space = 4096;
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 150; ++trial) {
    TensorNetwork tn = oracle::random_network(rng, opts);
    // Plant structure the passes can act on.
    for (auto& n : tn.nodes) {
      if (n.indices.size() == 2 && tn.dim(n.indices[0]) == tn.dim(n.indices[1]) && coin(rng)) {
        const std::int64_t d = tn.dim(n.indices[0]);
        for (std::int64_t i = 0; i < d; ++i) {
          for (std::int64_t j = 0; j < d; ++j) {
            if (coin(rng) ? i != j : i + j != d - 1) (*n.data)[i * d + j] = 0.0;
          }
        }
      } else if (n.indices.size() == 1 && coin(rng)) {
        for (std::size_t i = 1; i < n.data->size(); ++i) (*n.data)[i] = 0.0;
      }
    }
    const auto expected = value(tn);
    using Pass = int (*)(TensorNetwork&, const SimplifyOptions&);
    const Pass passes[] = {antidiagonal_gauge, diagonal_reduce, column_reduce, rank_simplify,
                           split_simplify};
    for (Pass pass : passes) {
      TensorNetwork t = tn;
      pass(t, {});
      EXPECT_TRUE(validate(t).empty()) << "trial " << trial;
      EXPECT_LT(rel_diff(value(t), expected), 1e-10) << "trial " << trial;
    }
    const TensorNetwork s = simplify_fixed_point(tn);
    EXPECT_LT(rel_diff(value(s), expected), 1e-10) << "trial " << trial;
    EXPECT_EQ(simplify_fixed_point(s), s) << "trial " << trial;
  }
}

TEST(FixedPoint, CycleCapIsNumericError) {
  TensorNetwork tn = with_random_data(parse_einsum_spec("a,ab,b->", {{2}, {2, 2}, {2}}), 20);
  SimplifyOptions o;
  o.max_cycles = 1;
  EXPECT_THROW(simplify_fixed_point(tn, o), NumericError);
}
