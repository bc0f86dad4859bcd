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

#include <Eigen/Dense>
#include <cmath>

#include "support/oracles.hpp"
#include "tnpath/dense.hpp"
#include "tnpath/error.hpp"
#include "tnpath/generators.hpp"

using namespace tnpath;

namespace {

DenseTensor identity2(const Label& a, const Label& b) {
  return DenseTensor({a, b}, {2, 2}, {1.0, 0.0, 0.0, 1.0});
}

std::vector<Complex> random_matrix(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> normal;
  std::vector<Complex> m(rows * cols);
  for (auto& z : m) {
    const double re = normal(rng);
    z = Complex(re, normal(rng));
  }
  return m;
}

std::vector<Complex> matmul(const std::vector<Complex>& a, const std::vector<Complex>& b, int rows,
                            int inner, int cols) {
  std::vector<Complex> c(rows * cols, 0.0);
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < inner; ++k) {
      for (int j = 0; j < cols; ++j) c[i * cols + j] += a[i * inner + k] * b[k * cols + j];
    }
  }
  return c;
}

double frob(const std::vector<Complex>& m) {
  double s = 0;
  for (const auto& z : m) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace

TEST(PairwiseContract, TraceOfIdentity) {
  const DenseTensor r = pairwise_contract(identity2("a", "b"), identity2("b", "a"), {});
  ASSERT_EQ(r.rank(), 0);
  EXPECT_NEAR(std::abs(r.data[0] - Complex(2.0)), 0.0, 1e-15);
}

TEST(PairwiseContract, MatmulCountsMultiplyAdds) {
  Rng rng(1);
  DenseTensor a({"i", "j"}, {2, 4}, random_matrix(rng, 2, 4));
  DenseTensor b({"j", "k"}, {4, 8}, random_matrix(rng, 4, 8));
  std::uint64_t mac = 0;
  const DenseTensor c = pairwise_contract(a, b, {"i", "k"}, &mac);
  EXPECT_EQ(mac, 64u);
  const auto ref = matmul(a.data, b.data, 2, 4, 8);
  ASSERT_EQ(c.labels, (std::vector<Label>{"i", "k"}));
  for (int x = 0; x < 16; ++x) EXPECT_NEAR(std::abs(c.data[x] - ref[x]), 0.0, 1e-12);
}

TEST(PairwiseContract, HadamardOnHyperedges) {
  Rng rng(2);
  DenseTensor a({"a", "b"}, {2, 3}, random_matrix(rng, 2, 3));
  DenseTensor b({"a", "b"}, {2, 3}, random_matrix(rng, 2, 3));
  const DenseTensor c = pairwise_contract(a, b, {"a", "b"});
  ASSERT_EQ(c.labels, (std::vector<Label>{"a", "b"}));
  for (int x = 0; x < 6; ++x) EXPECT_NEAR(std::abs(c.data[x] - a.data[x] * b.data[x]), 0.0, 1e-14);
}

TEST(PairwiseContract, IdentityIsRename) {
  Rng rng(3);
  DenseTensor t({"x", "y"}, {2, 2}, random_matrix(rng, 2, 2));
  const DenseTensor r = pairwise_contract(t, identity2("y", "z"), {"x", "z"});
  ASSERT_EQ(r.labels, (std::vector<Label>{"x", "z"}));
  for (int x = 0; x < 4; ++x) EXPECT_NEAR(std::abs(r.data[x] - t.data[x]), 0.0, 1e-15);
}

TEST(PairwiseContract, Bilinear) {
  Rng rng(4);
  DenseTensor x1({"a", "b"}, {3, 2}, random_matrix(rng, 3, 2));
  DenseTensor x2({"a", "b"}, {3, 2}, random_matrix(rng, 3, 2));
  DenseTensor y({"b", "c"}, {2, 2}, random_matrix(rng, 2, 2));
  const Complex s(0.3, -1.2);
  DenseTensor mix = x1;
  for (int i = 0; i < 6; ++i) mix.data[i] = x1.data[i] + s * x2.data[i];
  const auto lhs = pairwise_contract(mix, y, {"a", "c"});
  const auto r1 = pairwise_contract(x1, y, {"a", "c"});
  const auto r2 = pairwise_contract(x2, y, {"a", "c"});
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(std::abs(lhs.data[i] - (r1.data[i] + s * r2.data[i])), 0.0, 1e-12);
}

TEST(PairwiseContract, DimMismatchThrows) {
  DenseTensor a({"a"}, {2}, {1.0, 2.0});
  DenseTensor b({"a"}, {3}, {1.0, 2.0, 3.0});
  EXPECT_THROW(pairwise_contract(a, b, {}), Error);
}

TEST(FixIndex, IdentityRow) {
  const DenseTensor r = fix_index(identity2("a", "b"), "a", 0);
  ASSERT_EQ(r.labels, (std::vector<Label>{"b"}));
  EXPECT_EQ(r.data, (std::vector<Complex>{1.0, 0.0}));
}

TEST(FixIndex, OutOfRangeThrows) {
  EXPECT_THROW(fix_index(identity2("a", "b"), "a", 5), UsageError);
}

TEST(FixIndex, SlicesSumToFullContraction) {
  Rng rng(5);
  DenseTensor t({"a", "b", "c"}, {2, 3, 2}, random_matrix(rng, 1, 12));
  DenseTensor u({"b", "c"}, {3, 2}, random_matrix(rng, 3, 2));
  const Complex full = pairwise_contract(t, u, {"a"}).data[1];
  Complex sum = 0.0;
  for (int v = 0; v < 3; ++v) {
    sum += pairwise_contract(fix_index(t, "b", v), fix_index(u, "b", v), {"a"}).data[1];
  }
  EXPECT_NEAR(std::abs(full - sum), 0.0, 1e-12);
}

TEST(ZeroPattern, PauliMatrices) {
  DenseTensor z({"a", "b"}, {2, 2}, {1.0, 0.0, 0.0, -1.0});
  DenseTensor x({"a", "b"}, {2, 2}, {0.0, 1.0, 1.0, 0.0});
  DenseTensor s({"a"}, {2}, {1.0, 0.0});
  EXPECT_TRUE(zero_pattern(z, PatternKind::kDiagonal, 0, 1));
  EXPECT_FALSE(zero_pattern(z, PatternKind::kAntidiagonal, 0, 1));
  EXPECT_TRUE(zero_pattern(x, PatternKind::kAntidiagonal, 0, 1));
  EXPECT_FALSE(zero_pattern(x, PatternKind::kDiagonal, 0, 1));
  const auto col = zero_pattern(s, PatternKind::kColumn, 0);
  ASSERT_TRUE(col);
  EXPECT_EQ(col->column, 0);
}

TEST(ZeroPattern, BadAxesThrow) {
  DenseTensor t({"a", "b"}, {2, 3}, std::vector<Complex>(6, 1.0));
  EXPECT_THROW(zero_pattern(t, PatternKind::kDiagonal, 0, 1), UsageError);
  EXPECT_THROW(zero_pattern(t, PatternKind::kColumn, 4), UsageError);
}

TEST(ZeroPattern, RelativeTolerance) {
  DenseTensor t({"a", "b"}, {2, 2}, {1.0, 1e-13, 0.0, 1.0});
  EXPECT_TRUE(zero_pattern(t, PatternKind::kDiagonal, 0, 1));
  EXPECT_FALSE(zero_pattern(t, PatternKind::kDiagonal, 0, 1, 1e-14));
}

TEST(Factorize, RankOneOuterProduct) {
  Rng rng(6);
  const auto u = random_matrix(rng, 4, 1), v = random_matrix(rng, 1, 4);
  const auto f = exact_rank_factorize(matmul(u, v, 4, 1, 4), 4, 4);
  EXPECT_EQ(f.rank, 1);
}

TEST(Factorize, Identity) {
  std::vector<Complex> id(16, 0.0);
  for (int i = 0; i < 4; ++i) id[i * 5] = 1.0;
  const auto f = exact_rank_factorize(id, 4, 4);
  EXPECT_EQ(f.rank, 4);
  const auto r = matmul(f.left, f.right, 4, 4, 4);
  for (int i = 0; i < 16; ++i) EXPECT_NEAR(std::abs(r[i] - id[i]), 0.0, 1e-12);
}

TEST(Factorize, CzAcrossQubitsHasRankTwo) {
  const auto split = decompose_gate(gate_cz(), Decomposition::kSpatial);
  EXPECT_EQ(split.chi, 2);
}

TEST(Factorize, NonFiniteThrows) {
  std::vector<Complex> m{1.0, std::nan(""), 0.0, 1.0};
  EXPECT_THROW(exact_rank_factorize(m, 2, 2), NumericError);
}

// Reconstruction bound and rank against Gaussian elimination on 1000 random
// exact-rank matrices.
TEST(Factorize, RandomExactRankMatrices) {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int rows = std::uniform_int_distribution<int>(1, 16)(rng);
    const int cols = std::uniform_int_distribution<int>(1, 16)(rng);
    const int r = std::uniform_int_distribution<int>(0, std::min(rows, cols))(rng);
    auto m = matmul(random_matrix(rng, rows, r), random_matrix(rng, r, cols), rows, r, cols);
    if (r == 0) m.assign(rows * cols, 0.0);
    const auto f = exact_rank_factorize(m, rows, cols, 1e-12);
    ASSERT_EQ(f.rank, oracle::matrix_rank(m, rows, cols)) << "trial " << trial;
    ASSERT_EQ(f.rank, r);
    const auto rec = f.rank > 0 ? matmul(f.left, f.right, rows, f.rank, cols)
                                : std::vector<Complex>(rows * cols, 0.0);
    std::vector<Complex> diff(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) diff[i] = rec[i] - m[i];
    ASSERT_LE(frob(diff), 1e-12 * std::max(frob(m), 1.0) * 10) << "trial " << trial;
  }
}

TEST(Svd, SingularValuesMatchEigen) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = std::uniform_int_distribution<int>(1, 12)(rng);
    const int cols = std::uniform_int_distribution<int>(1, 12)(rng);
    const auto m = random_matrix(rng, rows, cols);
    Eigen::MatrixXcd e(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) e(i, j) = m[i * cols + j];
    }
    const Eigen::VectorXd ref = Eigen::JacobiSVD<Eigen::MatrixXcd>(e).singularValues();
    const Svd s = jacobi_svd(m, rows, cols);
    ASSERT_EQ(static_cast<int>(s.s.size()), ref.size());
    for (int k = 0; k < ref.size(); ++k) EXPECT_NEAR(s.s[k], ref(k), 1e-10 * ref(0));
  }
}

TEST(Transpose, RoundTrip) {
  Rng rng(9);
  DenseTensor t({"a", "b", "c"}, {2, 3, 4}, random_matrix(rng, 1, 24));
  const std::vector<Label> order{"c", "a", "b"};
  const auto p = transpose(t, order);
  EXPECT_EQ(p.dims, (std::vector<std::int64_t>{4, 2, 3}));
  const std::vector<Label> back{"a", "b", "c"};
  EXPECT_EQ(transpose(p, back).data, t.data);
}

TEST(TakeDiagonal, KeepsDiagonal) {
  DenseTensor t({"a", "b"}, {2, 2}, {1.0, 2.0, 3.0, 4.0});
  const auto d = take_diagonal(t, "a", "b");
  EXPECT_EQ(d.labels, (std::vector<Label>{"a"}));
  EXPECT_EQ(d.data, (std::vector<Complex>{1.0, 4.0}));
}
