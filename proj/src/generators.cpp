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

#include "tnpath/generators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "tnpath/dense.hpp"
#include "tnpath/error.hpp"

namespace tnpath {

namespace {

using namespace std::complex_literals;

std::vector<Complex> random_data(std::int64_t size, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> d(static_cast<std::size_t>(size));
  for (auto& z : d) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = Complex(re, im) / std::sqrt(2.0);
  }
  return d;
}

bool connected(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n == 0) return true;
  std::vector<std::vector<int>> adj(n);
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n;
}

std::string site(int r, int c) { return std::to_string(r) + "_" + std::to_string(c); }

}  // namespace

// ---------------------------------------------------------------------------
// Graphs.

Graph random_regular_graph(int n, int k, std::uint64_t seed) {
  if (n <= 0 || k <= 0) throw UsageError("regular graph needs n > 0 and k > 0");
  if ((static_cast<long long>(n) * k) % 2 != 0) {
    throw UsageError("n*k must be even for a k-regular graph (n=" + std::to_string(n) +
                     ", k=" + std::to_string(k) + ")");
  }
  if (k >= n) throw UsageError("k must be smaller than n");
  Rng rng(seed);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::vector<int> stubs;
    for (int v = 0; v < n; ++v) {
      for (int i = 0; i < k; ++i) stubs.push_back(v);
    }
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<std::pair<int, int>> edges;
    bool ok = true;
    while (!stubs.empty() && ok) {
      const int u = stubs.back();
      stubs.pop_back();
      ok = false;
      std::uniform_int_distribution<std::size_t> pick(0, stubs.size() - 1);
      for (int t = 0; t < 64 && !stubs.empty(); ++t) {
        const std::size_t i = pick(rng);
        const int v = stubs[i];
        const auto e = std::minmax(u, v);
        if (u == v || edges.count(e)) continue;
        edges.insert(e);
        stubs[i] = stubs.back();
        stubs.pop_back();
        ok = true;
        break;
      }
    }
    if (!ok) continue;
    Graph g{n, {edges.begin(), edges.end()}};
    if (connected(n, g.edges)) return g;
  }
  throw Error("failed to sample a connected regular graph");
}

Graph random_planar_graph(int n, std::uint64_t seed) {
  if (n < 3) throw UsageError("planar graph needs n >= 3");
  Rng rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<std::array<double, 2>> pts(n);
  for (auto& p : pts) p = {u01(rng), u01(rng)};
  // Bowyer-Watson with a large enclosing triangle (vertices n, n+1, n+2).
  pts.push_back({-100.0, -100.0});
  pts.push_back({100.0, -100.0});
  pts.push_back({0.0, 100.0});
  using Tri = std::array<int, 3>;
  std::vector<Tri> tris{{n, n + 1, n + 2}};
  auto in_circle = [&](const Tri& t, const std::array<double, 2>& p) {
    const auto& a = pts[t[0]];
    const auto& b = pts[t[1]];
    const auto& c = pts[t[2]];
    const double ax = a[0] - p[0], ay = a[1] - p[1];
    const double bx = b[0] - p[0], by = b[1] - p[1];
    const double cx = c[0] - p[0], cy = c[1] - p[1];
    const double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                       (bx * bx + by * by) * (ax * cy - cx * ay) +
                       (cx * cx + cy * cy) * (ax * by - bx * ay);
    const double orient = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    return orient > 0 ? det > 0 : det < 0;
  };
  for (int i = 0; i < n; ++i) {
    std::vector<Tri> keep;
    std::map<std::pair<int, int>, int> boundary;
    for (const Tri& t : tris) {
      if (in_circle(t, pts[i])) {
        for (int s = 0; s < 3; ++s) boundary[std::minmax(t[s], t[(s + 1) % 3])] += 1;
      } else {
        keep.push_back(t);
      }
    }
    for (const auto& [e, cnt] : boundary) {
      if (cnt == 1) keep.push_back({e.first, e.second, i});
    }
    tris = std::move(keep);
  }
  std::set<std::pair<int, int>> edge_set;
  for (const Tri& t : tris) {
    if (t[0] >= n || t[1] >= n || t[2] >= n) continue;
    for (int s = 0; s < 3; ++s) edge_set.insert(std::minmax(t[s], t[(s + 1) % 3]));
  }
  std::vector<std::pair<int, int>> edges(edge_set.begin(), edge_set.end());
  // Hull edges of triangles touching the enclosing vertices can be missing
  // when the hull is nearly degenerate; reconnect components if needed.
  if (!connected(n, edges)) {
    for (const Tri& t : tris) {
      for (int s = 0; s < 3; ++s) {
        const int a = t[s], b = t[(s + 1) % 3];
        if (a < n && b < n) edge_set.insert(std::minmax(a, b));
      }
    }
    edges.assign(edge_set.begin(), edge_set.end());
  }
  const double target = 3.0 + u01(rng);
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<char> removed(edges.size(), 0);
  std::size_t m = edges.size();
  for (std::size_t i : order) {
    if (2.0 * static_cast<double>(m) / n <= target) break;
    removed[i] = 1;
    std::vector<std::pair<int, int>> rest;
    for (std::size_t j = 0; j < edges.size(); ++j) {
      if (!removed[j]) rest.push_back(edges[j]);
    }
    if (connected(n, rest)) {
      --m;
    } else {
      removed[i] = 0;
    }
  }
  Graph g{n, {}};
  for (std::size_t j = 0; j < edges.size(); ++j) {
    if (!removed[j]) g.edges.push_back(edges[j]);
  }
  return g;
}

TensorNetwork graph_network(const Graph& g, std::int64_t dim, std::uint64_t seed, bool with_data) {
  if (dim < 1) throw UsageError("dim must be positive");
  Rng rng(seed);
  TensorNetwork tn;
  tn.nodes.resize(g.num_vertices);
  for (int v = 0; v < g.num_vertices; ++v) tn.nodes[v].id = v;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const Label l = "e" + std::to_string(e);
    tn.index_dims[l] = dim;
    tn.nodes[g.edges[e].first].indices.push_back(l);
    tn.nodes[g.edges[e].second].indices.push_back(l);
  }
  if (with_data) {
    for (auto& node : tn.nodes) {
      std::int64_t size = 1;
      for (std::size_t i = 0; i < node.indices.size(); ++i) size *= dim;
      node.data = random_data(size, rng);
    }
  }
  return tn;
}

TensorNetwork random_regular(int n, int k, std::int64_t dim, std::uint64_t seed, bool with_data) {
  return graph_network(random_regular_graph(n, k, seed), dim, derive_seed(seed, 1), with_data);
}

TensorNetwork random_planar(int n, std::int64_t dim, std::uint64_t seed, bool with_data) {
  return graph_network(random_planar_graph(n, seed), dim, derive_seed(seed, 1), with_data);
}

// ---------------------------------------------------------------------------
// Lattices.

TensorNetwork square_lattice(int L, Boundary boundary, LatticeForm form, std::int64_t dim,
                             std::uint64_t seed, bool with_data) {
  if (L < 2) throw UsageError("lattice side must be at least 2");
  if (dim < 1) throw UsageError("dim must be positive");
  const bool pbc = boundary == Boundary::kPeriodic;
  Rng rng(seed);
  TensorNetwork tn;
  if (form == LatticeForm::kVertex) {
    for (int r = 0; r < L; ++r) {
      for (int c = 0; c < L; ++c) {
        TensorNode node;
        node.id = r * L + c;
        if (c > 0 || pbc) node.indices.push_back("h" + site(r, (c + L - 1) % L));
        if (c < L - 1 || pbc) node.indices.push_back("h" + site(r, c));
        if (r > 0 || pbc) node.indices.push_back("v" + site((r + L - 1) % L, c));
        if (r < L - 1 || pbc) node.indices.push_back("v" + site(r, c));
        for (const auto& l : node.indices) tn.index_dims[l] = dim;
        tn.nodes.push_back(std::move(node));
      }
    }
  } else {
    int id = 0;
    auto bond = [&](int r0, int c0, int r1, int c1) {
      TensorNode node;
      node.id = id++;
      node.indices = {"s" + site(r0, c0), "s" + site(r1, c1)};
      for (const auto& l : node.indices) tn.index_dims[l] = dim;
      tn.nodes.push_back(std::move(node));
    };
    for (int r = 0; r < L; ++r) {
      for (int c = 0; c < L; ++c) {
        if (c < L - 1 || pbc) bond(r, c, r, (c + 1) % L);
        if (r < L - 1 || pbc) bond(r, c, (r + 1) % L, c);
      }
    }
  }
  if (with_data) {
    for (auto& node : tn.nodes) {
      std::int64_t size = 1;
      for (std::size_t i = 0; i < node.indices.size(); ++i) size *= dim;
      node.data = random_data(size, rng);
    }
  }
  return tn;
}

ContractionTree tebd_exact_path(int L, Boundary boundary) {
  if (L < 2) throw UsageError("lattice side must be at least 2");
  (void)boundary;  // the sweep order is the same for both boundaries
  ContractionTree t(L * L);
  std::vector<int> rows;
  for (int r = 0; r < L; ++r) {
    int v = r * L;
    for (int c = 1; c < L; ++c) v = t.merge(v, r * L + c);
    rows.push_back(v);
  }
  int acc = rows[0];
  for (int r = 1; r < L; ++r) acc = t.merge(acc, rows[r]);
  return t;
}

// ---------------------------------------------------------------------------
// Weighted model counting.

double CnfFormula::weight(int literal) const {
  auto it = weights.find(literal);
  return it == weights.end() ? 1.0 : it->second;
}

CnfFormula parse_cnf(std::string_view text) {
  CnfFormula f;
  bool header = false;
  int declared_clauses = 0;
  std::vector<int> current;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw DataError("cnf line " + std::to_string(lineno) + ": " + msg);
  };
  auto parse_literal = [&](const std::string& tok) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(tok, &used);
      if (used != tok.size()) fail("bad literal '" + tok + "'");
      if (header && (v > f.num_vars || -v > f.num_vars)) fail("literal out of range: " + tok);
      return static_cast<int>(v);
    } catch (const std::logic_error&) {
      fail("bad literal '" + tok + "'");
    }
    return 0;
  };
  auto parse_weight = [&](const std::string& tok) {
    try {
      std::size_t used = 0;
      const double w = std::stod(tok, &used);
      if (used != tok.size() || !std::isfinite(w)) fail("bad weight '" + tok + "'");
      return w;
    } catch (const std::logic_error&) {
      fail("bad weight '" + tok + "'");
    }
    return 0.0;
  };
  auto set_weight = [&](const std::string& lit, const std::string& w) {
    if (!header) fail("weight before header");
    const int l = parse_literal(lit);
    if (l == 0) fail("weight for literal 0");
    f.weights[l] = parse_weight(w);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok[0] == "%") break;
    if (tok[0] == "c") {
      if (tok.size() >= 5 && tok[1] == "p" && tok[2] == "weight") set_weight(tok[3], tok[4]);
      continue;
    }
    if (tok[0] == "p") {
      if (header) fail("duplicate header");
      if (tok.size() < 4 || (tok[1] != "cnf" && tok[1] != "wcnf")) fail("malformed header");
      try {
        f.num_vars = std::stoi(tok[2]);
        declared_clauses = std::stoi(tok[3]);
      } catch (const std::logic_error&) {
        fail("malformed header");
      }
      if (f.num_vars < 0 || declared_clauses < 0) fail("malformed header");
      header = true;
      continue;
    }
    if (tok[0] == "w") {
      if (tok.size() < 3) fail("malformed weight line");
      set_weight(tok[1], tok[2]);
      continue;
    }
    if (!header) fail("clause before header");
    for (const auto& t : tok) {
      const int l = parse_literal(t);
      if (l == 0) {
        f.clauses.push_back(current);
        current.clear();
      } else {
        current.push_back(l);
      }
    }
  }
  if (!header) throw DataError("cnf: missing 'p cnf' header");
  if (!current.empty()) f.clauses.push_back(current);
  return f;
}

TensorNetwork wmc_network(const CnfFormula& f) {
  TensorNetwork tn;
  int id = 0;
  auto var = [](int v) { return "x" + std::to_string(v); };
  for (int v = 1; v <= f.num_vars; ++v) {
    tn.index_dims[var(v)] = 2;
    TensorNode node;
    node.id = id++;
    node.indices = {var(v)};
    node.data = std::vector<Complex>{f.weight(-v), f.weight(v)};
    tn.nodes.push_back(std::move(node));
  }
  for (const auto& clause : f.clauses) {
    // Distinct variables with the value that falsifies each literal.
    std::map<int, int> falsify;
    bool tautology = false;
    for (int l : clause) {
      const int v = std::abs(l);
      const int bad = l > 0 ? 0 : 1;
      auto [it, fresh] = falsify.emplace(v, bad);
      if (!fresh && it->second != bad) tautology = true;
    }
    if (tautology) continue;
    TensorNode node;
    node.id = id++;
    if (falsify.empty()) {
      node.data = std::vector<Complex>{0.0};
      tn.nodes.push_back(std::move(node));
      continue;
    }
    std::int64_t zero = 0;
    for (const auto& [v, bad] : falsify) {
      node.indices.push_back(var(v));
      zero = zero * 2 + bad;
    }
    std::vector<Complex> data(static_cast<std::size_t>(1) << falsify.size(), 1.0);
    data[static_cast<std::size_t>(zero)] = 0.0;
    node.data = std::move(data);
    tn.nodes.push_back(std::move(node));
  }
  return tn;
}

TensorNetwork parse_wmc(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return wmc_network(parse_cnf(ss.str()));
}

// ---------------------------------------------------------------------------
// QAOA.

namespace {

std::vector<std::set<int>> lightcone_layers(const Graph& g, int j, int k, int p) {
  // layers[l] = qubits needed right after cost layer l (l = p..0).
  std::vector<std::set<int>> layers(p + 1);
  layers[p] = {j, k};
  for (int l = p; l >= 1; --l) {
    layers[l - 1] = layers[l];
    for (const auto& [a, b] : g.edges) {
      if (layers[l].count(a) || layers[l].count(b)) {
        layers[l - 1].insert(a);
        layers[l - 1].insert(b);
      }
    }
  }
  return layers;
}

}  // namespace

std::vector<int> qaoa_lightcone(const Graph& g, int j, int k, int p) {
  const auto layers = lightcone_layers(g, j, k, p);
  return {layers[0].begin(), layers[0].end()};
}

std::vector<TensorNetwork> qaoa_energy_terms(const Graph& g, std::span<const double> gammas,
                                             std::span<const double> betas) {
  if (gammas.size() != betas.size()) {
    throw UsageError("gamma and beta must have the same length");
  }
  const int p = static_cast<int>(gammas.size());
  std::vector<TensorNetwork> terms;
  for (const auto& [j, k] : g.edges) {
    const auto layers = lightcone_layers(g, j, k, p);
    std::map<int, int> time;
    std::vector<TensorNode> ket;
    auto wire = [&](int q) { return "k" + std::to_string(q) + "_" + std::to_string(time[q]); };
    for (int q : layers[0]) {
      time[q] = 0;
      ket.push_back({0, {wire(q)}, std::vector<Complex>(2, 1.0 / std::sqrt(2.0))});
    }
    for (int l = 1; l <= p; ++l) {
      const double gm = gammas[l - 1], bt = betas[l - 1];
      const Complex same = std::exp(-1i * gm), diff = std::exp(1i * gm);
      for (const auto& [a, b] : g.edges) {
        if (!layers[l].count(a) && !layers[l].count(b)) continue;
        ket.push_back({0, {wire(a), wire(b)}, std::vector<Complex>{same, diff, diff, same}});
      }
      const Complex c = std::cos(bt), s = -1i * std::sin(bt);
      for (int q : layers[l]) {
        const Label in = wire(q);
        time[q] += 1;
        ket.push_back({0, {wire(q), in}, std::vector<Complex>{c, s, s, c}});
      }
    }
    std::set<Label> final_labels;
    for (int q : layers[0]) final_labels.insert(wire(q));

    TensorNetwork tn;
    int id = 0;
    for (auto node : ket) {
      node.id = id++;
      for (const auto& l : node.indices) tn.index_dims[l] = 2;
      tn.nodes.push_back(std::move(node));
    }
    for (const auto& src : ket) {
      TensorNode node = src;
      node.id = id++;
      for (auto& l : node.indices) {
        if (!final_labels.count(l)) l = "b" + l.substr(1);
        tn.index_dims[l] = 2;
      }
      for (auto& z : *node.data) z = std::conj(z);
      tn.nodes.push_back(std::move(node));
    }
    for (int q : {j, k}) {
      tn.nodes.push_back({id++, {wire(q)}, std::vector<Complex>{1.0, -1.0}});
    }
    terms.push_back(std::move(tn));
  }
  return terms;
}

// ---------------------------------------------------------------------------
// Circuits.

namespace {

Gate1 sqrt_pauli(const Gate1& p) {
  const Complex a = (1.0 + 1i) / 2.0, b = (1.0 - 1i) / 2.0;
  return {a + b * p[0], b * p[1], b * p[2], a + b * p[3]};
}

}  // namespace

Gate1 gate_h() {
  const double s = 1.0 / std::sqrt(2.0);
  return {s, s, s, -s};
}
Gate1 gate_sqrt_x() { return sqrt_pauli({0.0, 1.0, 1.0, 0.0}); }
Gate1 gate_sqrt_y() { return sqrt_pauli({0.0, -1i, 1i, 0.0}); }
Gate1 gate_sqrt_w() {
  const double s = 1.0 / std::sqrt(2.0);
  return sqrt_pauli({0.0, s * (1.0 - 1i), s * (1.0 + 1i), 0.0});
}

Gate2 gate_cz() {
  Gate2 g{};
  g[0] = g[5] = g[10] = 1.0;
  g[15] = -1.0;
  return g;
}

Gate2 gate_iswap() {
  Gate2 g{};
  g[0] = g[15] = 1.0;
  g[6] = g[9] = 1i;
  return g;
}

Gate2 random_unitary4(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::array<std::array<Complex, 4>, 4> cols;
  for (auto& col : cols) {
    for (auto& z : col) z = Complex(normal(rng), normal(rng));
  }
  // Modified Gram-Schmidt on the columns.
  for (int c = 0; c < 4; ++c) {
    for (int p = 0; p < c; ++p) {
      Complex dot = 0.0;
      for (int r = 0; r < 4; ++r) dot += std::conj(cols[p][r]) * cols[c][r];
      for (int r = 0; r < 4; ++r) cols[c][r] -= dot * cols[p][r];
    }
    double norm = 0.0;
    for (int r = 0; r < 4; ++r) norm += std::norm(cols[c][r]);
    norm = std::sqrt(norm);
    for (int r = 0; r < 4; ++r) cols[c][r] /= norm;
  }
  Gate2 u{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) u[r * 4 + c] = cols[c][r];
  }
  return u;
}

GateSplit decompose_gate(const Gate2& u, Decomposition mode, int chi_max, double trunc_tol) {
  GateSplit s;
  if (mode == Decomposition::kNone) return s;
  // Tensor axes are (o_a, o_b, i_a, i_b); pick the row/column grouping.
  const std::array<int, 4> perm = mode == Decomposition::kSpatial ? std::array<int, 4>{0, 2, 1, 3}
                                                                  : std::array<int, 4>{0, 3, 1, 2};
  std::vector<Complex> m(16);
  for (int x = 0; x < 16; ++x) {
    const int bits[4] = {x >> 3 & 1, x >> 2 & 1, x >> 1 & 1, x & 1};
    int src[4];
    for (int a = 0; a < 4; ++a) src[perm[a]] = bits[a];
    m[x] = u[src[0] * 8 + src[1] * 4 + src[2] * 2 + src[3]];
  }
  Factorization f = exact_rank_factorize(m, 4, 4, std::max(trunc_tol, kDefaultRelTol));
  s.chi = static_cast<int>(f.rank);
  s.fidelity = f.kept_weight;
  s.applied = s.chi < chi_max;
  s.left = std::move(f.left);
  s.right = std::move(f.right);
  return s;
}

CircuitBuilder::CircuitBuilder(int num_qubits, Decomposition mode, int chi_max, double trunc_tol)
    : n_(num_qubits), mode_(mode), chi_max_(chi_max), trunc_tol_(trunc_tol), time_(num_qubits, 0) {
  if (num_qubits < 1) throw UsageError("circuit needs at least one qubit");
  for (int q = 0; q < n_; ++q) {
    const Label l = "q" + std::to_string(q) + "_0";
    tn_.index_dims[l] = 2;
    tn_.nodes.push_back({q, {l}, std::vector<Complex>{1.0, 0.0}});
  }
}

Label CircuitBuilder::advance(int q) {
  time_[q] += 1;
  const Label l = "q" + std::to_string(q) + "_" + std::to_string(time_[q]);
  tn_.index_dims[l] = 2;
  return l;
}

void CircuitBuilder::apply1(int q, const Gate1& g) {
  if (q < 0 || q >= n_) throw UsageError("qubit out of range");
  const Label in = "q" + std::to_string(q) + "_" + std::to_string(time_[q]);
  const Label out = advance(q);
  tn_.nodes.push_back({tn_.next_node_id(), {out, in}, std::vector<Complex>(g.begin(), g.end())});
  gates_.push_back({{q}, {g.begin(), g.end()}});
}

void CircuitBuilder::apply2(int a, int b, const Gate2& g) {
  if (a < 0 || b < 0 || a >= n_ || b >= n_ || a == b) throw UsageError("bad qubit pair");
  const Label ia = "q" + std::to_string(a) + "_" + std::to_string(time_[a]);
  const Label ib = "q" + std::to_string(b) + "_" + std::to_string(time_[b]);
  const Label oa = advance(a);
  const Label ob = advance(b);
  gates_.push_back({{a, b}, {g.begin(), g.end()}});
  const GateSplit s = decompose_gate(g, mode_, chi_max_, trunc_tol_);
  if (mode_ != Decomposition::kNone && s.applied) {
    const Label bond = "g" + std::to_string(decomposed_);
    tn_.index_dims[bond] = s.chi;
    const bool spatial = mode_ == Decomposition::kSpatial;
    tn_.nodes.push_back({tn_.next_node_id(), {oa, spatial ? ia : ib, bond}, s.left});
    tn_.nodes.push_back({tn_.next_node_id(), {bond, ob, spatial ? ib : ia}, s.right});
    fidelity_ *= s.fidelity;
    ++decomposed_;
    return;
  }
  tn_.nodes.push_back({tn_.next_node_id(), {oa, ob, ia, ib}, std::vector<Complex>(g.begin(), g.end())});
}

TensorNetwork CircuitBuilder::network() const {
  TensorNetwork tn = tn_;
  for (int q = 0; q < n_; ++q) tn.output.push_back("q" + std::to_string(q) + "_" + std::to_string(time_[q]));
  return tn;
}

Gateset parse_gateset(const std::string& name) {
  if (name == "cz") return Gateset::kCz;
  if (name == "iswap") return Gateset::kIswap;
  if (name == "random") return Gateset::kRandom;
  throw UsageError("unknown gateset " + name);
}

CircuitBuilder grid_circuit(int rows, int cols, int depth, std::uint64_t seed,
                            const CircuitOptions& options) {
  if (rows < 1 || cols < 1) throw UsageError("grid needs positive rows and cols");
  if (depth < 0) throw UsageError("depth must be non-negative");
  Rng rng(seed);
  CircuitBuilder cb(rows * cols, options.decomposition, options.chi_max, options.trunc_tol);
  const int n = rows * cols;
  for (int q = 0; q < n; ++q) cb.apply1(q, gate_h());
  const std::array<Gate1, 3> singles{gate_sqrt_x(), gate_sqrt_y(), gate_sqrt_w()};
  std::vector<int> last(n, -1);
  for (int cycle = 0; cycle < depth; ++cycle) {
    for (int q = 0; q < n; ++q) {
      int pick;
      do {
        pick = std::uniform_int_distribution<int>(0, 2)(rng);
      } while (pick == last[q]);
      last[q] = pick;
      cb.apply1(q, singles[pick]);
    }
    const int pattern = cycle % 4;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        int r2 = r, c2 = c;
        if (pattern < 2) {
          if (c % 2 != pattern || c + 1 >= cols) continue;
          c2 = c + 1;
        } else {
          if (r % 2 != pattern - 2 || r + 1 >= rows) continue;
          r2 = r + 1;
        }
        Gate2 g;
        switch (options.gateset) {
          case Gateset::kCz:
            g = gate_cz();
            break;
          case Gateset::kIswap:
            g = gate_iswap();
            break;
          case Gateset::kRandom:
            g = random_unitary4(rng);
            break;
        }
        cb.apply2(r * cols + c, r2 * cols + c2, g);
      }
    }
  }
  for (int q = 0; q < n; ++q) cb.apply1(q, gate_h());
  return cb;
}

}  // namespace tnpath
