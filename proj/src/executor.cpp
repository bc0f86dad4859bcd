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

#include "tnpath/executor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_set>

#include "tnpath/error.hpp"

namespace tnpath {

namespace {

struct RawResult {
  DenseTensor value;
  std::int64_t exp2 = 0;
  double op_count = 0.0;
  std::int64_t peak = 0;
};

void check_finite(const DenseTensor& t) {
  for (const auto& z : t.data) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw NumericError("non-finite intermediate tensor");
    }
  }
}

// Scales t by 2^-k so that its max-abs lies in [1, 2); returns k.
std::int64_t strip(DenseTensor& t) {
  const double m = t.max_abs();
  if (!(m > 0.0)) return 0;
  const int k = std::ilogb(m);
  for (auto& z : t.data) z = Complex(std::ldexp(z.real(), -k), std::ldexp(z.imag(), -k));
  return k;
}

RawResult run_tree(std::vector<DenseTensor> leaves, const ContractionTree& tree,
                   const Hypergraph& hg, const std::vector<Label>& output, bool strip_exp) {
  if (tree.num_leaves() != static_cast<int>(leaves.size())) {
    throw DataError("tree has " + std::to_string(tree.num_leaves()) + " leaves but network has " +
                    std::to_string(leaves.size()) + " nodes");
  }
  if (!tree.is_complete()) throw UsageError("contraction tree is incomplete");
  const auto inc = annotate_incidence(tree, hg);
  RawResult r;
  std::vector<std::optional<DenseTensor>> slot(tree.num_vertices());
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (strip_exp) r.exp2 += strip(leaves[i]);
    slot[i] = std::move(leaves[i]);
  }
  for (int v = tree.num_leaves(); v < tree.num_vertices(); ++v) {
    std::unordered_set<Label> keep;
    for (const auto& [e, c] : inc[v]) keep.insert(hg.edge_label[e]);
    std::uint64_t mac = 0;
    DenseTensor t = pairwise_contract(*slot[tree.left(v)], *slot[tree.right(v)], keep, &mac);
    slot[tree.left(v)].reset();
    slot[tree.right(v)].reset();
    r.op_count += static_cast<double>(mac);
    r.peak = std::max(r.peak, t.size());
    check_finite(t);
    if (strip_exp) r.exp2 += strip(t);
    slot[v] = std::move(t);
  }
  DenseTensor top = std::move(*slot[tree.root()]);
  const std::unordered_set<Label> out_set(output.begin(), output.end());
  if (tree.num_internal() == 0) top = sum_except(top, out_set);
  r.value = transpose(top, output);
  return r;
}

Hypergraph structure_of(const TensorNetwork& tn) {
  TensorNetwork s = tn;
  for (auto& n : s.nodes) n.data.reset();
  return Hypergraph::from_network(s);
}

std::vector<DenseTensor> leaf_tensors(const TensorNetwork& tn) {
  std::vector<DenseTensor> out;
  out.reserve(tn.nodes.size());
  for (std::size_t i = 0; i < tn.nodes.size(); ++i) out.push_back(tn.tensor(i));
  return out;
}

ContractResult finish(RawResult raw, double norm_exponent) {
  ContractResult r;
  r.value = std::move(raw.value);
  r.exponent10 = static_cast<double>(raw.exp2) * std::log10(2.0) + norm_exponent;
  r.op_count = raw.op_count;
  r.peak_elements = raw.peak;
  return r;
}

}  // namespace

ContractResult contract(const TensorNetwork& tn, const ContractionTree& tree,
                        const ContractOptions& options) {
  if (!tn.has_data()) throw DataError("network has nodes without data");
  const Hypergraph hg = Hypergraph::from_network(tn);
  return finish(run_tree(leaf_tensors(tn), tree, hg, tn.output, options.strip_exponent),
                tn.norm_exponent);
}

ContractResult contract_sliced(const TensorNetwork& tn, const ContractionTree& tree,
                               std::span<const Label> sliced, const ContractOptions& options) {
  if (sliced.empty()) return contract(tn, tree, options);
  if (!tn.has_data()) throw DataError("network has nodes without data");
  std::vector<std::int64_t> dims;
  for (const auto& l : sliced) {
    if (!tn.index_dims.count(l)) throw UsageError("unknown slice label " + l);
    if (std::find(tn.output.begin(), tn.output.end(), l) != tn.output.end()) {
      throw UsageError("cannot slice output label " + l);
    }
    dims.push_back(tn.dim(l));
  }
  std::map<Label, std::int64_t> zeros;
  for (const auto& l : sliced) zeros[l] = 0;
  TensorNetwork shape = tn;
  for (auto& n : shape.nodes) n.data.reset();
  const Hypergraph hg = structure_of(fix_labels(shape, zeros));
  const std::vector<DenseTensor> base = leaf_tensors(tn);
  const std::int64_t total = product(dims);

  std::vector<RawResult> results(static_cast<std::size_t>(total));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&]() {
    try {
      for (std::int64_t a = next++; a < total; a = next++) {
        std::vector<std::int64_t> value(sliced.size());
        std::int64_t rem = a;
        for (std::size_t i = sliced.size(); i-- > 0;) {
          value[i] = rem % dims[i];
          rem /= dims[i];
        }
        std::vector<DenseTensor> leaves = base;
        for (auto& t : leaves) {
          for (std::size_t i = 0; i < sliced.size(); ++i) {
            if (t.axis(sliced[i]) >= 0) t = fix_index(t, sliced[i], value[i]);
          }
        }
        results[static_cast<std::size_t>(a)] =
            run_tree(std::move(leaves), tree, hg, tn.output, options.strip_exponent);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next = total;
    }
  };
  const int threads = static_cast<int>(std::clamp<std::int64_t>(options.parallelism, 1, total));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  RawResult sum;
  std::int64_t e2 = std::numeric_limits<std::int64_t>::min();
  for (const auto& r : results) {
    if (r.value.max_abs() > 0.0) e2 = std::max(e2, r.exp2);
  }
  if (e2 == std::numeric_limits<std::int64_t>::min()) e2 = 0;
  sum.value = results[0].value;
  std::vector<Complex> acc(sum.value.data.size()), comp(sum.value.data.size());
  for (const auto& r : results) {
    const int shift = static_cast<int>(std::max<std::int64_t>(r.exp2 - e2, -2000));
    for (std::size_t i = 0; i < acc.size(); ++i) {
      const Complex z(std::ldexp(r.value.data[i].real(), shift),
                      std::ldexp(r.value.data[i].imag(), shift));
      // Kahan summation, component-wise.
      const Complex y = z - comp[i];
      const Complex t = acc[i] + y;
      comp[i] = (t - acc[i]) - y;
      acc[i] = t;
    }
    sum.op_count += r.op_count;
    sum.peak = std::max(sum.peak, r.peak);
  }
  sum.value.data = std::move(acc);
  sum.exp2 = e2;
  check_finite(sum.value);
  return finish(std::move(sum), tn.norm_exponent);
}

TensorNetwork fix_labels(const TensorNetwork& tn, const std::map<Label, std::int64_t>& values) {
  for (const auto& [l, v] : values) {
    auto it = tn.index_dims.find(l);
    if (it == tn.index_dims.end()) throw UsageError("unknown label " + l);
    if (v < 0 || v >= it->second) {
      throw UsageError("value " + std::to_string(v) + " out of range for " + l);
    }
  }
  TensorNetwork out = tn;
  for (std::size_t p = 0; p < out.nodes.size(); ++p) {
    auto& node = out.nodes[p];
    bool touched = false;
    for (const auto& l : node.indices) touched = touched || values.count(l);
    if (!touched) continue;
    if (node.data) {
      DenseTensor t = tn.tensor(p);
      for (const auto& [l, v] : values) {
        if (t.axis(l) >= 0) t = fix_index(t, l, v);
      }
      node.data = std::move(t.data);
    }
    std::erase_if(node.indices, [&](const Label& l) { return values.count(l) > 0; });
  }
  for (const auto& [l, v] : values) out.index_dims.erase(l);
  std::erase_if(out.output, [&](const Label& l) { return values.count(l) > 0; });
  return out;
}

TensorNetwork project_outputs(const TensorNetwork& tn, std::span<const int> bits) {
  if (bits.size() != tn.output.size()) {
    throw UsageError("bitstring has " + std::to_string(bits.size()) + " entries for " +
                     std::to_string(tn.output.size()) + " outputs");
  }
  std::map<Label, std::int64_t> values;
  for (std::size_t i = 0; i < bits.size(); ++i) values[tn.output[i]] = bits[i];
  return fix_labels(tn, values);
}

Complex amplitude(const TensorNetwork& tn, const ContractionTree& tree, std::span<const int> bits) {
  const ContractResult r = contract(project_outputs(tn, bits), tree, {.strip_exponent = true});
  return r.value.data.at(0) * std::pow(10.0, r.exponent10);
}

}  // namespace tnpath
