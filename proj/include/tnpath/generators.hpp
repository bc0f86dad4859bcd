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

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tnpath/network.hpp"
#include "tnpath/rng.hpp"
#include "tnpath/tree.hpp"

namespace tnpath {

struct Graph {
  int num_vertices = 0;
  /// Sorted pairs (u < v).
  std::vector<std::pair<int, int>> edges;
};

/// Connected simple k-regular graph by stub pairing with restarts. Not an
/// exactly uniform sampler. Throws UsageError when n*k is odd or k >= n.
Graph random_regular_graph(int n, int k, std::uint64_t seed);

/// Delaunay triangulation of n uniform points in the unit square, thinned by
/// random connectivity-preserving edge deletions to a mean degree drawn
/// from [3, 4]. Throws UsageError for n < 3.
Graph random_planar_graph(int n, std::uint64_t seed);

/// One node per vertex over its incident edges (labels "e<idx>"), all dims
/// equal to `dim`, random complex Gaussian data unless `with_data` is false.
TensorNetwork graph_network(const Graph& g, std::int64_t dim, std::uint64_t seed,
                            bool with_data = true);

TensorNetwork random_regular(int n, int k, std::int64_t dim, std::uint64_t seed,
                             bool with_data = true);
TensorNetwork random_planar(int n, std::int64_t dim, std::uint64_t seed, bool with_data = true);

enum class Boundary { kOpen, kPeriodic };
enum class LatticeForm { kVertex, kHyperedge };

/// Vertex form: node r*L+c per site over bonds "h<r>_<c>" (to the right) and
/// "v<r>_<c>" (downwards). Hyperedge form: one rank-2 node per bond over the
/// two site labels "s<r>_<c>", which become hyperedges.
TensorNetwork square_lattice(int L, Boundary boundary, LatticeForm form, std::int64_t dim,
                             std::uint64_t seed = 0, bool with_data = true);

/// Exact boundary-MPS sweep on the vertex form: each row absorbs the columns
/// left to right, then the rows are merged top to bottom.
ContractionTree tebd_exact_path(int L, Boundary boundary);

// ---------------------------------------------------------------------------
// Weighted model counting.

struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  /// Literal weights; literals without an entry weigh 1.
  std::map<int, double> weights;

  double weight(int literal) const;
};

/// DIMACS "p cnf" text with optional "w <lit> <weight>" and
/// "c p weight <lit> <weight> 0" lines. Throws DataError on malformed input.
CnfFormula parse_cnf(std::string_view text);

/// Variable v is the dim-2 index "x<v>"; one weight node (w(-v), w(v)) per
/// variable and one OR node per clause that is 0 exactly at the assignment
/// falsifying every literal. Empty clauses become a zero scalar.
TensorNetwork wmc_network(const CnfFormula& f);

TensorNetwork parse_wmc(const std::string& path);

// ---------------------------------------------------------------------------
// QAOA.

/// One network per edge (j, k) for <gamma, beta| Z_j Z_k |gamma, beta> of
/// unit-weight MAX-CUT, built only from the gates in the reverse lightcone.
/// ZZ phases enter as diagonal rank-2 nodes on the wire labels.
std::vector<TensorNetwork> qaoa_energy_terms(const Graph& g, std::span<const double> gammas,
                                             std::span<const double> betas);

/// Qubits in the reverse lightcone of edge (j, k) at depth p.
std::vector<int> qaoa_lightcone(const Graph& g, int j, int k, int p);

// ---------------------------------------------------------------------------
// Circuits.

using Gate1 = std::array<Complex, 4>;
/// Row-major over (o_a o_b, i_a i_b).
using Gate2 = std::array<Complex, 16>;

Gate1 gate_h();
/// sqrt of a Pauli-like P (P^2 = I): ((1 + i) I + (1 - i) P) / 2.
Gate1 gate_sqrt_x();
Gate1 gate_sqrt_y();
Gate1 gate_sqrt_w();
Gate2 gate_cz();
Gate2 gate_iswap();
Gate2 random_unitary4(Rng& rng);

enum class Decomposition { kNone, kSpatial, kSwap };

struct GateSplit {
  int chi = 4;
  bool applied = false;
  /// Sum of kept squared singular values over the total.
  double fidelity = 1.0;
  std::vector<Complex> left;   // (o_a, i_a | o_a, i_b) x chi
  std::vector<Complex> right;  // chi x (o_b, i_b | o_b, i_a)
};

/// Factorizes a two-qubit gate across {o_a, i_a}|{o_b, i_b} (spatial) or
/// {o_a, i_b}|{o_b, i_a} (swap). Singular values below
/// max(trunc_tol, 1e-12) * sigma_max are dropped; applied iff chi < chi_max.
GateSplit decompose_gate(const Gate2& u, Decomposition mode, int chi_max = 4,
                         double trunc_tol = 0.0);

struct GateOp {
  std::vector<int> qubits;
  std::vector<Complex> matrix;
};

/// Builds a circuit network from |0...0>; wire labels are "q<q>_<t>".
class CircuitBuilder {
 public:
  explicit CircuitBuilder(int num_qubits, Decomposition mode = Decomposition::kNone,
                          int chi_max = 4, double trunc_tol = 0.0);

  void apply1(int q, const Gate1& g);
  void apply2(int a, int b, const Gate2& g);
  /// Output legs are the final wires in qubit order.
  TensorNetwork network() const;

  const std::vector<GateOp>& gates() const { return gates_; }
  double fidelity() const { return fidelity_; }
  int decomposed() const { return decomposed_; }
  int num_qubits() const { return n_; }

 private:
  Label advance(int q);

  int n_;
  Decomposition mode_;
  int chi_max_;
  double trunc_tol_;
  TensorNetwork tn_;
  std::vector<int> time_;
  std::vector<GateOp> gates_;
  double fidelity_ = 1.0;
  int decomposed_ = 0;
};

enum class Gateset { kCz, kIswap, kRandom };

Gateset parse_gateset(const std::string& name);

struct CircuitOptions {
  Gateset gateset = Gateset::kCz;
  Decomposition decomposition = Decomposition::kNone;
  int chi_max = 4;
  double trunc_tol = 0.0;
};

/// H layer, `depth` cycles of random sqrt(X)/sqrt(Y)/sqrt(W) gates followed
/// by two-qubit gates on one of four alternating brick patterns, final H layer.
CircuitBuilder grid_circuit(int rows, int cols, int depth, std::uint64_t seed,
                            const CircuitOptions& options = {});

}  // namespace tnpath
