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

#include "tnpath/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tnpath/error.hpp"

namespace tnpath {

DenseTensor::DenseTensor(std::vector<Label> labels_, std::vector<std::int64_t> dims_,
                         std::vector<Complex> data_)
    : labels(std::move(labels_)), dims(std::move(dims_)), data(std::move(data_)) {
  if (labels.size() != dims.size()) {
    throw DataError("tensor has " + std::to_string(labels.size()) + " labels but " +
                    std::to_string(dims.size()) + " dims");
  }
  if (static_cast<std::int64_t>(data.size()) != product(dims)) {
    throw DataError("tensor data length " + std::to_string(data.size()) +
                    " does not match shape product " + std::to_string(product(dims)));
  }
}

DenseTensor DenseTensor::scalar(Complex value) { return DenseTensor({}, {}, {value}); }

int DenseTensor::axis(const Label& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  return -1;
}

double DenseTensor::max_abs() const {
  double m = 0.0;
  for (const auto& z : data) m = std::max(m, std::abs(z));
  return m;
}

std::vector<std::int64_t> DenseTensor::strides() const {
  std::vector<std::int64_t> st(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) st[i] = st[i + 1] * dims[i + 1];
  return st;
}

std::int64_t product(std::span<const std::int64_t> dims) {
  std::int64_t p = 1;
  for (auto d : dims) p *= d;
  return p;
}

namespace {

// Gathers `src` into a new row-major buffer whose axis i walks source stride
// `src_strides[i]` over `dims[i]` entries.
std::vector<Complex> gather(const std::vector<Complex>& src,
                            const std::vector<std::int64_t>& dims,
                            const std::vector<std::int64_t>& src_strides) {
  const std::int64_t total = product(dims);
  std::vector<Complex> out(static_cast<std::size_t>(total));
  if (total == 0) return out;
  const int r = static_cast<int>(dims.size());
  if (r == 0) {
    out[0] = src[0];
    return out;
  }
  std::vector<std::int64_t> idx(r, 0);
  std::int64_t off = 0;
  const std::int64_t inner_dim = dims[r - 1];
  const std::int64_t inner_stride = src_strides[r - 1];
  for (std::int64_t pos = 0; pos < total; pos += inner_dim) {
    for (std::int64_t k = 0; k < inner_dim; ++k) out[pos + k] = src[off + k * inner_stride];
    for (int ax = r - 2; ax >= 0; --ax) {
      if (++idx[ax] < dims[ax]) {
        off += src_strides[ax];
        break;
      }
      off -= src_strides[ax] * (dims[ax] - 1);
      idx[ax] = 0;
    }
  }
  return out;
}

}  // namespace

DenseTensor transpose(const DenseTensor& t, std::span<const Label> order) {
  if (order.size() != t.labels.size()) throw UsageError("transpose: order has wrong length");
  const auto st = t.strides();
  std::vector<std::int64_t> dims, src_strides;
  std::vector<Label> labels;
  for (const auto& l : order) {
    int ax = t.axis(l);
    if (ax < 0) throw UsageError("transpose: unknown label " + l);
    dims.push_back(t.dims[ax]);
    src_strides.push_back(st[ax]);
    labels.push_back(l);
  }
  if (std::equal(order.begin(), order.end(), t.labels.begin())) return t;
  return DenseTensor(std::move(labels), dims, gather(t.data, dims, src_strides));
}

DenseTensor sum_except(const DenseTensor& t, const std::unordered_set<Label>& keep) {
  std::vector<Label> kept, summed;
  for (const auto& l : t.labels) (keep.count(l) ? kept : summed).push_back(l);
  if (summed.empty()) return t;
  std::vector<Label> order = kept;
  order.insert(order.end(), summed.begin(), summed.end());
  DenseTensor p = transpose(t, order);
  std::vector<std::int64_t> kdims(p.dims.begin(), p.dims.begin() + kept.size());
  const std::int64_t outer = product(kdims);
  const std::int64_t inner = outer == 0 ? 0 : p.size() / std::max<std::int64_t>(outer, 1);
  std::vector<Complex> out(static_cast<std::size_t>(outer), Complex{});
  for (std::int64_t i = 0; i < outer; ++i) {
    Complex acc{};
    for (std::int64_t j = 0; j < inner; ++j) acc += p.data[i * inner + j];
    out[i] = acc;
  }
  return DenseTensor(std::move(kept), std::move(kdims), std::move(out));
}

DenseTensor pairwise_contract(const DenseTensor& x, const DenseTensor& y,
                              const std::unordered_set<Label>& keep,
                              std::uint64_t* multiply_adds) {
  std::vector<Label> batch, contracted, xk, yk;
  std::uint64_t union_size = 1;
  for (int i = 0; i < x.rank(); ++i) {
    const Label& l = x.labels[i];
    const int j = y.axis(l);
    if (j >= 0) {
      if (x.dims[i] != y.dims[j]) throw DataError("dimension mismatch on shared label " + l);
      (keep.count(l) ? batch : contracted).push_back(l);
    } else if (keep.count(l)) {
      xk.push_back(l);
    }
    union_size *= static_cast<std::uint64_t>(x.dims[i]);
  }
  for (int j = 0; j < y.rank(); ++j) {
    const Label& l = y.labels[j];
    if (x.axis(l) >= 0) continue;
    if (keep.count(l)) yk.push_back(l);
    union_size *= static_cast<std::uint64_t>(y.dims[j]);
  }
  if (multiply_adds) *multiply_adds = union_size;

  // Labels private to one operand and not kept are summed up front.
  std::unordered_set<Label> x_keep(batch.begin(), batch.end());
  x_keep.insert(contracted.begin(), contracted.end());
  x_keep.insert(xk.begin(), xk.end());
  std::unordered_set<Label> y_keep(batch.begin(), batch.end());
  y_keep.insert(contracted.begin(), contracted.end());
  y_keep.insert(yk.begin(), yk.end());

  std::vector<Label> x_order = batch;
  x_order.insert(x_order.end(), xk.begin(), xk.end());
  x_order.insert(x_order.end(), contracted.begin(), contracted.end());
  std::vector<Label> y_order = batch;
  y_order.insert(y_order.end(), contracted.begin(), contracted.end());
  y_order.insert(y_order.end(), yk.begin(), yk.end());

  const DenseTensor xa = transpose(sum_except(x, x_keep), x_order);
  const DenseTensor ya = transpose(sum_except(y, y_keep), y_order);

  auto dim_of = [](const DenseTensor& t, const std::vector<Label>& ls) {
    std::int64_t p = 1;
    for (const auto& l : ls) p *= t.dims[t.axis(l)];
    return p;
  };
  const std::int64_t nb = dim_of(xa, batch);
  const std::int64_t ni = dim_of(xa, xk);
  const std::int64_t nc = dim_of(xa, contracted);
  const std::int64_t nj = dim_of(ya, yk);

  std::vector<Label> out_labels = batch;
  out_labels.insert(out_labels.end(), xk.begin(), xk.end());
  out_labels.insert(out_labels.end(), yk.begin(), yk.end());
  std::vector<std::int64_t> out_dims;
  for (const auto& l : batch) out_dims.push_back(xa.dims[xa.axis(l)]);
  for (const auto& l : xk) out_dims.push_back(xa.dims[xa.axis(l)]);
  for (const auto& l : yk) out_dims.push_back(ya.dims[ya.axis(l)]);

  std::vector<Complex> out(static_cast<std::size_t>(nb * ni * nj), Complex{});
  for (std::int64_t b = 0; b < nb; ++b) {
    const Complex* xb = xa.data.data() + b * ni * nc;
    const Complex* yb = ya.data.data() + b * nc * nj;
    Complex* ob = out.data() + b * ni * nj;
    for (std::int64_t i = 0; i < ni; ++i) {
      Complex* orow = ob + i * nj;
      for (std::int64_t c = 0; c < nc; ++c) {
        const Complex xv = xb[i * nc + c];
        if (xv == Complex{}) continue;
        const Complex* yrow = yb + c * nj;
        for (std::int64_t j = 0; j < nj; ++j) orow[j] += xv * yrow[j];
      }
    }
  }
  return DenseTensor(std::move(out_labels), std::move(out_dims), std::move(out));
}

DenseTensor fix_index(const DenseTensor& t, const Label& label, std::int64_t value) {
  const int ax = t.axis(label);
  if (ax < 0) throw UsageError("fix_index: label " + label + " not present");
  if (value < 0 || value >= t.dims[ax]) {
    throw UsageError("fix_index: value " + std::to_string(value) + " out of range for " +
                     label + " of dim " + std::to_string(t.dims[ax]));
  }
  const auto st = t.strides();
  std::vector<Label> labels;
  std::vector<std::int64_t> dims, src_strides;
  for (int i = 0; i < t.rank(); ++i) {
    if (i == ax) continue;
    labels.push_back(t.labels[i]);
    dims.push_back(t.dims[i]);
    src_strides.push_back(st[i]);
  }
  // Shift the source base by value * stride through a view copy.
  std::vector<Complex> shifted(t.data.begin() + value * st[ax], t.data.end());
  return DenseTensor(std::move(labels), dims, gather(shifted, dims, src_strides));
}

DenseTensor flip_index(const DenseTensor& t, const Label& label) {
  const int ax = t.axis(label);
  if (ax < 0) throw UsageError("flip_index: label " + label + " not present");
  const auto st = t.strides();
  const std::int64_t d = t.dims[ax];
  DenseTensor out = t;
  const std::int64_t block = st[ax] * d;
  for (std::int64_t base = 0; base < t.size(); base += block) {
    for (std::int64_t i = 0; i < d; ++i) {
      for (std::int64_t k = 0; k < st[ax]; ++k) {
        out.data[base + i * st[ax] + k] = t.data[base + (d - 1 - i) * st[ax] + k];
      }
    }
  }
  return out;
}

DenseTensor take_diagonal(const DenseTensor& t, const Label& keep, const Label& drop) {
  const int ax = t.axis(keep);
  const int ay = t.axis(drop);
  if (ax < 0 || ay < 0 || ax == ay) throw UsageError("take_diagonal: bad labels");
  if (t.dims[ax] != t.dims[ay]) throw UsageError("take_diagonal: unequal dims");
  const auto st = t.strides();
  std::vector<Label> labels;
  std::vector<std::int64_t> dims, src_strides;
  for (int i = 0; i < t.rank(); ++i) {
    if (i == ay) continue;
    labels.push_back(t.labels[i]);
    dims.push_back(t.dims[i]);
    src_strides.push_back(i == ax ? st[ax] + st[ay] : st[i]);
  }
  return DenseTensor(std::move(labels), dims, gather(t.data, dims, src_strides));
}

// ---------------------------------------------------------------------------

Svd jacobi_svd(std::span<const Complex> a, std::int64_t rows, std::int64_t cols) {
  if (static_cast<std::int64_t>(a.size()) != rows * cols) throw UsageError("jacobi_svd: size mismatch");
  for (const auto& z : a) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw NumericError("jacobi_svd: non-finite input");
    }
  }
  // Work on the orientation with at least as many rows as columns; the
  // columns of W are orthogonalized in place.
  const bool flip = rows < cols;
  const std::int64_t m = flip ? cols : rows;
  const std::int64_t n = flip ? rows : cols;
  // Column-major storage of W (m x n) and V (n x n).
  std::vector<Complex> w(static_cast<std::size_t>(m * n));
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int64_t j = 0; j < cols; ++j) {
      if (flip) {
        w[i * m + j] = std::conj(a[i * cols + j]);  // W = A^H, column i
      } else {
        w[j * m + i] = a[i * cols + j];
      }
    }
  }
  std::vector<Complex> v(static_cast<std::size_t>(n * n), Complex{});
  for (std::int64_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  constexpr double kEps = 1e-15;
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::int64_t p = 0; p < n - 1; ++p) {
      for (std::int64_t q = p + 1; q < n; ++q) {
        Complex* wp = &w[p * m];
        Complex* wq = &w[q * m];
        double alpha = 0.0, beta = 0.0;
        Complex gamma{};
        for (std::int64_t i = 0; i < m; ++i) {
          alpha += std::norm(wp[i]);
          beta += std::norm(wq[i]);
          gamma += std::conj(wp[i]) * wq[i];
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        // Remove the phase of gamma from column q, then do a real rotation.
        const Complex phase = std::conj(gamma) / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::int64_t i = 0; i < m; ++i) {
          const Complex xp = wp[i];
          const Complex xq = wq[i] * phase;
          wp[i] = c * xp - s * xq;
          wq[i] = s * xp + c * xq;
        }
        Complex* vp = &v[p * n];
        Complex* vq = &v[q * n];
        for (std::int64_t i = 0; i < n; ++i) {
          const Complex xp = vp[i];
          const Complex xq = vq[i] * phase;
          vp[i] = c * xp - s * xq;
          vq[i] = s * xp + c * xq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < m; ++i) acc += std::norm(w[j * m + i]);
    sv[j] = std::sqrt(acc);
  }
  std::vector<std::int64_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return sv[x] > sv[y]; });

  // W = U' S and A' = W V^H where A' is A (or A^H when flipped).
  // Unflipped: A = U S V^H. Flipped: A^H = U' S V^H, so A = V S U'^H.
  Svd out;
  out.rows = rows;
  out.cols = cols;
  const std::int64_t k = n;
  out.s.resize(k);
  out.u.assign(static_cast<std::size_t>(rows * k), Complex{});
  out.vh.assign(static_cast<std::size_t>(k * cols), Complex{});
  for (std::int64_t r = 0; r < k; ++r) {
    const std::int64_t j = order[r];
    const double sj = sv[j];
    out.s[r] = sj;
    if (!flip) {
      for (std::int64_t i = 0; i < rows; ++i) {
        out.u[i * k + r] = sj > 0 ? w[j * m + i] / sj : Complex{};
      }
      for (std::int64_t c = 0; c < cols; ++c) out.vh[r * cols + c] = std::conj(v[j * n + c]);
    } else {
      for (std::int64_t i = 0; i < rows; ++i) out.u[i * k + r] = v[j * n + i];
      for (std::int64_t c = 0; c < cols; ++c) {
        out.vh[r * cols + c] = sj > 0 ? std::conj(w[j * m + c]) / sj : Complex{};
      }
    }
  }
  return out;
}

Factorization exact_rank_factorize(std::span<const Complex> m, std::int64_t rows,
                                   std::int64_t cols, double rel_tol) {
  const Svd svd = jacobi_svd(m, rows, cols);
  Factorization f;
  f.singular_values = svd.s;
  const std::int64_t k = static_cast<std::int64_t>(svd.s.size());
  const double smax = k > 0 ? svd.s[0] : 0.0;
  std::int64_t r = 0;
  while (r < k && svd.s[r] > rel_tol * smax && svd.s[r] > 0.0) ++r;
  double total = 0.0, kept = 0.0;
  for (std::int64_t i = 0; i < k; ++i) {
    total += svd.s[i] * svd.s[i];
    if (i < r) kept += svd.s[i] * svd.s[i];
  }
  f.kept_weight = total > 0 ? kept / total : 1.0;
  f.rank = r;
  f.left.assign(static_cast<std::size_t>(rows * r), Complex{});
  f.right.assign(static_cast<std::size_t>(r * cols), Complex{});
  for (std::int64_t j = 0; j < r; ++j) {
    const double root = std::sqrt(svd.s[j]);
    for (std::int64_t i = 0; i < rows; ++i) f.left[i * r + j] = svd.u[i * k + j] * root;
    for (std::int64_t c = 0; c < cols; ++c) f.right[j * cols + c] = svd.vh[j * cols + c] * root;
  }
  return f;
}

// ---------------------------------------------------------------------------

std::optional<PatternMatch> zero_pattern(const DenseTensor& t, PatternKind kind, int axis_x,
                                         int axis_y, double rel_tol) {
  if (axis_x < 0 || axis_x >= t.rank()) throw UsageError("zero_pattern: axis out of range");
  const double threshold = rel_tol * t.max_abs();
  const auto st = t.strides();
  auto coord = [&](std::int64_t flat, int ax) { return (flat / st[ax]) % t.dims[ax]; };

  if (kind == PatternKind::kColumn) {
    std::optional<std::int64_t> col;
    for (std::int64_t f = 0; f < t.size(); ++f) {
      if (std::abs(t.data[f]) <= threshold) continue;
      const std::int64_t c = coord(f, axis_x);
      if (col && *col != c) return std::nullopt;
      col = c;
    }
    return PatternMatch{kind, axis_x, -1, col.value_or(0)};
  }

  if (axis_y < 0 || axis_y >= t.rank() || axis_y == axis_x) {
    throw UsageError("zero_pattern: second axis out of range");
  }
  if (t.dims[axis_x] != t.dims[axis_y]) throw UsageError("zero_pattern: unequal dims");
  const std::int64_t d = t.dims[axis_x];
  for (std::int64_t f = 0; f < t.size(); ++f) {
    if (std::abs(t.data[f]) <= threshold) continue;
    const std::int64_t ix = coord(f, axis_x);
    const std::int64_t iy = coord(f, axis_y);
    const bool ok = kind == PatternKind::kDiagonal ? ix == iy : ix == d - 1 - iy;
    if (!ok) return std::nullopt;
  }
  return PatternMatch{kind, axis_x, axis_y, 0};
}

}  // namespace tnpath
