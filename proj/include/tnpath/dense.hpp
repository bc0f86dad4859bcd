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

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace tnpath {

using Complex = std::complex<double>;
using Label = std::string;

/// Relative threshold used by every zero and rank test unless overridden.
inline constexpr double kDefaultRelTol = 1e-12;

/// Row-major complex tensor with one label per axis.
struct DenseTensor {
  std::vector<Label> labels;
  std::vector<std::int64_t> dims;
  std::vector<Complex> data;

  DenseTensor() = default;
  DenseTensor(std::vector<Label> labels, std::vector<std::int64_t> dims,
              std::vector<Complex> data);

  static DenseTensor scalar(Complex value);

  int rank() const { return static_cast<int>(labels.size()); }
  std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }
  /// Axis position of `label`, or -1.
  int axis(const Label& label) const;
  double max_abs() const;
  std::vector<std::int64_t> strides() const;
};

std::int64_t product(std::span<const std::int64_t> dims);

/// Reorders axes so that labels appear in `order` (a permutation of t.labels).
DenseTensor transpose(const DenseTensor& t, std::span<const Label> order);

/// Sums out every axis whose label is not in `keep`, preserving the order of
/// the kept axes.
DenseTensor sum_except(const DenseTensor& t, const std::unordered_set<Label>& keep);

/// Contracts x with y. Shared labels in `keep` are carried as batch axes
/// (hyperedges); all other labels not in `keep` are summed. Output axes are
/// batch labels, then x-only kept labels, then y-only kept labels.
/// `multiply_adds` receives the product of the dims over the union of labels.
DenseTensor pairwise_contract(const DenseTensor& x, const DenseTensor& y,
                              const std::unordered_set<Label>& keep,
                              std::uint64_t* multiply_adds = nullptr);

/// Slice of t with `label` fixed to `value`; the axis is removed.
DenseTensor fix_index(const DenseTensor& t, const Label& label, std::int64_t value);

/// Reverses the order of entries along `label`.
DenseTensor flip_index(const DenseTensor& t, const Label& label);

/// Diagonal of t over two equal-sized axes; `drop` is removed, `keep` stays.
DenseTensor take_diagonal(const DenseTensor& t, const Label& keep, const Label& drop);

// ---------------------------------------------------------------------------
// Singular value decomposition and exact low-rank factorization.

/// Thin SVD, A = U diag(s) V^H, for a row-major rows x cols matrix.
/// Singular values are sorted in descending order.
struct Svd {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<Complex> u;   // rows x k, row-major
  std::vector<double> s;    // k = min(rows, cols)
  std::vector<Complex> vh;  // k x cols, row-major
};

/// One-sided Jacobi SVD.
Svd jacobi_svd(std::span<const Complex> a, std::int64_t rows, std::int64_t cols);

struct Factorization {
  std::int64_t rank = 0;
  std::vector<Complex> left;   // rows x rank
  std::vector<Complex> right;  // rank x cols
  std::vector<double> singular_values;  // all of them, descending
  /// Fraction of squared singular weight that was kept.
  double kept_weight = 1.0;
};

/// Factorizes M ~ L R with singular values below rel_tol * sigma_max dropped
/// and sqrt(sigma) absorbed into each factor. Throws NumericError on
/// non-finite input.
Factorization exact_rank_factorize(std::span<const Complex> m, std::int64_t rows,
                                   std::int64_t cols, double rel_tol = kDefaultRelTol);

// ---------------------------------------------------------------------------
// Sparsity patterns used by the simplification passes.

enum class PatternKind { kDiagonal, kAntidiagonal, kColumn };

struct PatternMatch {
  PatternKind kind;
  int axis_x = 0;
  int axis_y = -1;  // unused for kColumn
  std::int64_t column = 0;  // only for kColumn
};

/// diag: t == 0 whenever i_x != i_y. antidiag: t == 0 whenever
/// i_x != d - 1 - i_y. column: unique c with t == 0 for all i_x != c.
/// "Zero" means |entry| <= rel_tol * max|t|. An all-zero tensor matches
/// column c = 0. Throws UsageError for bad axes.
std::optional<PatternMatch> zero_pattern(const DenseTensor& t, PatternKind kind,
                                         int axis_x, int axis_y = -1,
                                         double rel_tol = kDefaultRelTol);

}  // namespace tnpath
