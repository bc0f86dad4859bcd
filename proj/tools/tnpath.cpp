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


// tnpath command-line front end: gen, simplify, optimize, slice, contract and
// bench. Every command is deterministic under --seed at parallelism 1.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "tnpath/error.hpp"
#include "tnpath/executor.hpp"
#include "tnpath/generators.hpp"
#include "tnpath/hypergraph.hpp"
#include "tnpath/io.hpp"
#include "tnpath/simplify.hpp"
#include "tnpath/slicer.hpp"
#include "tnpath/tuner.hpp"

using namespace tnpath;

namespace {

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Objective parse_objective(const std::string& s) {
  if (s == "width") return Objective::kWidth;
  if (s == "cost") return Objective::kCost;
  if (s == "sliced-cost") return Objective::kSlicedCost;
  throw UsageError("unknown target " + s);
}

// A path file is either a bare path object or a report with a "path" field.
ContractionTree read_tree(const std::string& file, int num_leaves) {
  const Json j = read_json(file);
  if (j.contains("path") && j.at("path").is_object()) return path_from_json(j.at("path"), num_leaves);
  return path_from_json(j, num_leaves);
}

std::vector<Label> read_slices(const std::string& file) {
  const Json j = read_json(file);
  const Json& s = j.contains("sliced") ? j.at("sliced") : j;
  try {
    return s.at("labels").get<std::vector<Label>>();
  } catch (const Json::exception& e) {
    throw DataError(file + ": no slice labels: " + e.what());
  }
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << text;
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string out = "-";
  std::uint64_t seed = 0;
  std::int64_t dim = 2;
  bool no_data = false;
  int n = 10;
  int k = 3;
  int L = 4;
  std::string boundary = "open";
  std::string form = "vertex";
  int rows = 3;
  int cols = 3;
  int depth = 8;
  std::string gateset = "cz";
  std::string decompose = "none";
  int chi_max = 4;
  double trunc_tol = 0.0;
  bool amplitude = false;
  std::string cnf;
  int p = 1;
  int edge = 0;
  std::vector<double> gammas;
  std::vector<double> betas;
  std::string spec;
  std::string shapes;
};

void add_common_gen(CLI::App* sub, GenArgs& a) {
  sub->add_option("-o,--out", a.out, "Output interchange file ('-' for stdout)");
  sub->add_option("--seed", a.seed, "Random seed");
}

TensorNetwork run_gen(const std::string& kind, const GenArgs& a) {
  const bool data = !a.no_data;
  if (kind == "regular") return random_regular(a.n, a.k, a.dim, a.seed, data);
  if (kind == "planar") return random_planar(a.n, a.dim, a.seed, data);
  if (kind == "lattice") {
    Boundary b;
    if (a.boundary == "open") {
      b = Boundary::kOpen;
    } else if (a.boundary == "periodic") {
      b = Boundary::kPeriodic;
    } else {
      throw UsageError("boundary must be open or periodic");
    }
    LatticeForm f;
    if (a.form == "vertex") {
      f = LatticeForm::kVertex;
    } else if (a.form == "hyperedge") {
      f = LatticeForm::kHyperedge;
    } else {
      throw UsageError("form must be vertex or hyperedge");
    }
    return square_lattice(a.L, b, f, a.dim, a.seed, data);
  }
  if (kind == "circuit") {
    CircuitOptions o;
    o.gateset = parse_gateset(a.gateset);
    if (a.decompose == "none") {
      o.decomposition = Decomposition::kNone;
    } else if (a.decompose == "spatial") {
      o.decomposition = Decomposition::kSpatial;
    } else if (a.decompose == "swap") {
      o.decomposition = Decomposition::kSwap;
    } else {
      throw UsageError("decompose must be none, spatial or swap");
    }
    o.chi_max = a.chi_max;
    o.trunc_tol = a.trunc_tol;
    TensorNetwork tn = grid_circuit(a.rows, a.cols, a.depth, a.seed, o).network();
    if (a.amplitude) {
      const std::vector<int> zeros(tn.output.size(), 0);
      tn = project_outputs(tn, zeros);
    }
    return tn;
  }
  if (kind == "wmc") return parse_wmc(a.cnf);
  if (kind == "qaoa") {
    const Graph g = random_regular_graph(a.n, a.k, a.seed);
    std::vector<double> gammas = a.gammas, betas = a.betas;
    if (gammas.empty() && betas.empty()) {
      Rng rng(derive_seed(a.seed, 1));
      std::uniform_real_distribution<double> ug(0.0, std::numbers::pi);
      std::uniform_real_distribution<double> ub(0.0, std::numbers::pi / 2);
      for (int l = 0; l < a.p; ++l) {
        gammas.push_back(ug(rng));
        betas.push_back(ub(rng));
      }
    }
    if (a.edge < 0 || a.edge >= static_cast<int>(g.edges.size())) {
      throw UsageError("edge index out of range");
    }
    return qaoa_energy_terms(g, gammas, betas)[a.edge];
  }
  if (kind == "einsum") {
    std::vector<std::vector<std::int64_t>> shapes;
    for (const auto& term : split_list(a.shapes, ';')) {
      std::vector<std::int64_t> shape;
      for (const auto& d : split_list(term, ',')) shape.push_back(std::stoll(d));
      shapes.push_back(shape);
    }
    TensorNetwork tn = parse_einsum_spec(a.spec, shapes);
    if (data) {
      Rng rng(a.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (std::size_t i = 0; i < tn.nodes.size(); ++i) {
        std::int64_t size = 1;
        for (const auto& l : tn.nodes[i].indices) size *= tn.dim(l);
        std::vector<Complex> d(static_cast<std::size_t>(size));
        for (auto& z : d) {
          const double re = normal(rng);
          z = Complex(re, normal(rng));
        }
        tn.nodes[i].data = std::move(d);
      }
    }
    return tn;
  }
  throw UsageError("unknown generator " + kind);
}

// ---------------------------------------------------------------------------

struct SimplifyArgs {
  std::string in;
  std::string out;
  std::string report;
  bool no_diagonal = false;
  int max_cycles = 1000;
  double rel_tol = kDefaultRelTol;
};

int cmd_simplify(const SimplifyArgs& a) {
  const TensorNetwork tn = load_network(a.in);
  SimplifyOptions opts;
  opts.diagonal = !a.no_diagonal;
  opts.max_cycles = a.max_cycles;
  opts.rel_tol = a.rel_tol;
  SimplifyReport report;
  const TensorNetwork out = simplify_fixed_point(tn, opts, &report);
  save_network(out, a.out);
  write_json(simplify_report_to_json(report), a.report.empty() ? a.out + ".report.json" : a.report);
  return 0;
}

// ---------------------------------------------------------------------------

struct OptimizeArgs {
  std::string in;
  std::string out;
  std::string network_out;
  std::string trial_log;
  std::string target = "cost";
  double slice_width = 0.0;
  int budget = 64;
  double seconds = 0.0;
  int parallelism = 1;
  std::uint64_t seed = 0;
  std::string drivers;
  bool no_simplify = false;
  bool no_timing = false;
};

int cmd_optimize(const OptimizeArgs& a) {
  TensorNetwork tn = load_network(a.in);
  SearchOptions opts;
  opts.objective = parse_objective(a.target);
  opts.slice_width = a.slice_width;
  opts.budget = a.budget;
  opts.seconds = a.seconds;
  opts.parallelism = a.parallelism;
  opts.seed = a.seed;
  opts.drivers = split_list(a.drivers, ',');
  if (opts.budget <= 0 && opts.seconds <= 0) {
    throw UsageError("optimize needs --budget > 0 or --seconds > 0");
  }
  if (opts.objective == Objective::kSlicedCost && a.slice_width <= 0) {
    throw UsageError("--target sliced-cost needs --slice-width");
  }
  std::string network_file = a.in;
  if (!a.no_simplify && tn.has_data()) {
    SimplifyOptions sopts;
    // Graph-only drivers cannot take the hyperedges diagonal reduction makes.
    sopts.diagonal = !(opts.drivers.size() == 1 && opts.drivers[0] == "gn");
    tn = simplify_fixed_point(tn, sopts);
    network_file = a.network_out.empty() ? a.out + ".network.json" : a.network_out;
    save_network(tn, network_file);
  }
  std::ofstream log;
  if (!a.trial_log.empty()) {
    log.open(a.trial_log);
    if (!log) throw DataError("cannot write " + a.trial_log);
    opts.on_trial = [&](const TrialRecord& t) { log << trial_to_json(t, !a.no_timing).dump() << '\n'; };
  }
  const Hypergraph hg = Hypergraph::from_network(tn);
  const PathReport report = search(hg, opts);
  Json j = report_to_json(report);
  // Relative to the report, so that a report and its network move together.
  const auto report_dir = std::filesystem::absolute(a.out).parent_path();
  j["network"] = std::filesystem::absolute(network_file).lexically_relative(report_dir).generic_string();
  j["simplified"] = network_file != a.in;
  write_json(j, a.out);
  return 0;
}

// ---------------------------------------------------------------------------

struct SliceArgs {
  std::string in;
  std::string path;
  std::string out = "-";
  double target_width = 0.0;
  int restarts = kDefaultSliceRestarts;
  double noise = kDefaultSliceNoise;
  std::uint64_t seed = 0;
};

int cmd_slice(const SliceArgs& a) {
  const TensorNetwork tn = load_network(a.in);
  const Hypergraph hg = Hypergraph::from_network(tn);
  const ContractionTree tree = read_tree(a.path, hg.num_nodes());
  const PathMetrics m = metrics(tree, hg);
  const SliceSet s = greedy_slice(tree, hg, a.target_width, a.restarts, a.noise, a.seed);
  Json j = slice_to_json(s);
  j["W"] = m.width;
  j["log10_C"] = m.log10_cost;
  // Every slice costs at least the unsliced share and at most the full tree.
  const double slack = 1e-9;
  j["bounds_ok"] = s.log10_cost + slack >= m.log10_cost &&
                   s.log10_cost <= std::log10(s.d_sliced) + m.log10_cost + slack;
  write_text(j.dump(2) + "\n", a.out);
  return 0;
}

// ---------------------------------------------------------------------------

struct ContractArgs {
  std::string in;
  std::string path;
  std::string slices;
  std::string out = "-";
  bool strip = false;
  int parallelism = 1;
};

int cmd_contract(const ContractArgs& a) {
  const TensorNetwork tn = load_network(a.in);
  const ContractionTree tree = read_tree(a.path, static_cast<int>(tn.nodes.size()));
  ContractOptions opts;
  opts.strip_exponent = a.strip;
  opts.parallelism = a.parallelism;
  ContractResult r;
  if (a.slices.empty()) {
    r = contract(tn, tree, opts);
  } else {
    const std::vector<Label> labels = read_slices(a.slices);
    r = contract_sliced(tn, tree, labels, opts);
  }
  write_text(contract_result_to_json(r).dump(2) + "\n", a.out);
  return 0;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string family = "regular";
  int n_min = 20;
  int n_max = 50;
  int n_step = 10;
  int param = 3;
  int instances = 10;
  std::string drivers = "greedy,gn,partition,minfill";
  std::string target = "cost";
  int budget = 64;
  double seconds = 0.0;
  int parallelism = 1;
  std::uint64_t seed = 0;
  std::string out = "-";
  bool no_timing = false;
};

TensorNetwork bench_instance(const BenchArgs& a, int n, std::uint64_t seed) {
  if (a.family == "regular") return random_regular(n, a.param, 2, seed, false);
  if (a.family == "planar") return random_planar(n, 2, seed, false);
  if (a.family == "lattice") return square_lattice(n, Boundary::kOpen, LatticeForm::kVertex, 2, seed, false);
  if (a.family == "circuit") {
    TensorNetwork tn = grid_circuit(n, n, a.param, seed).network();
    const std::vector<int> zeros(tn.output.size(), 0);
    return project_outputs(tn, zeros);
  }
  if (a.family == "qaoa") {
    const Graph g = random_regular_graph(n, 3, seed);
    const std::vector<double> angles(a.param, 0.3);
    return qaoa_energy_terms(g, angles, angles)[0];
  }
  throw UsageError("unknown bench family " + a.family);
}

int cmd_bench(const BenchArgs& a) {
  if (a.n_min < 1 || a.n_max < a.n_min || a.n_step < 1) throw UsageError("bad size range");
  if (a.instances < 1) throw UsageError("--instances must be positive");
  if (a.budget <= 0 && a.seconds <= 0) throw UsageError("bench needs --budget > 0 or --seconds > 0");
  const std::vector<std::string> drivers = split_list(a.drivers, ',');
  if (drivers.empty()) throw UsageError("no drivers given");
  for (const auto& d : drivers) driver_space(d);
  std::ostringstream csv;
  csv << "family,n,param,driver,seed,W,log10_C,seconds\n";
  for (int n = a.n_min; n <= a.n_max; n += a.n_step) {
    for (int i = 0; i < a.instances; ++i) {
      const std::uint64_t inst_seed = derive_seed(a.seed, (static_cast<std::uint64_t>(n) << 20) + i);
      const TensorNetwork tn = bench_instance(a, n, inst_seed);
      const Hypergraph hg = Hypergraph::from_network(tn);
      for (const auto& d : drivers) {
        if (d == "gn" && hg.has_hyperedges()) continue;
        SearchOptions opts;
        opts.objective = parse_objective(a.target);
        opts.budget = a.budget;
        opts.seconds = a.seconds;
        opts.parallelism = a.parallelism;
        opts.seed = inst_seed;
        opts.drivers = {d};
        const auto t0 = std::chrono::steady_clock::now();
        const PathReport r = search(hg, opts);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        char line[256];
        std::snprintf(line, sizeof line, "%s,%d,%d,%s,%llu,%.6f,%.6f,%.3f\n", a.family.c_str(), n,
                      a.family == "planar" ? 0 : a.param, d.c_str(),
                      static_cast<unsigned long long>(inst_seed), r.metrics.width,
                      r.metrics.log10_cost, a.no_timing ? 0.0 : secs);
        csv << line;
      }
    }
  }
  write_text(csv.str(), a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tnpath: contraction path optimization for tensor networks"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Key-value config file; [section] names select the subcommand");

  // gen
  CLI::App* gen = app.add_subcommand("gen", "Generate a network in the interchange format");
  gen->require_subcommand(1);
  GenArgs ga;
  std::string gen_kind;
  auto gen_sub = [&](const std::string& name, const std::string& help) {
    CLI::App* s = gen->add_subcommand(name, help);
    add_common_gen(s, ga);
    s->callback([&gen_kind, name] { gen_kind = name; });
    return s;
  };
  {
    CLI::App* s = gen_sub("regular", "Random k-regular graph");
    s->add_option("--n", ga.n, "Vertices");
    s->add_option("--k", ga.k, "Degree");
    s->add_option("--dim", ga.dim, "Bond dimension");
    s->add_flag("--no-data", ga.no_data, "Structure only");
    s = gen_sub("planar", "Random planar graph");
    s->add_option("--n", ga.n, "Vertices");
    s->add_option("--dim", ga.dim, "Bond dimension");
    s->add_flag("--no-data", ga.no_data, "Structure only");
    s = gen_sub("lattice", "L x L square lattice");
    s->add_option("--L", ga.L, "Side length");
    s->add_option("--boundary", ga.boundary, "open or periodic");
    s->add_option("--form", ga.form, "vertex or hyperedge");
    s->add_option("--dim", ga.dim, "Bond dimension");
    s->add_flag("--no-data", ga.no_data, "Structure only");
    s = gen_sub("circuit", "Random grid circuit");
    s->add_option("--rows", ga.rows, "Grid rows");
    s->add_option("--cols", ga.cols, "Grid columns");
    s->add_option("--depth", ga.depth, "Cycles");
    s->add_option("--gateset", ga.gateset, "cz, iswap or random");
    s->add_option("--decompose", ga.decompose, "none, spatial or swap");
    s->add_option("--chi-max", ga.chi_max, "Decompose only when the rank is below this");
    s->add_option("--trunc-tol", ga.trunc_tol, "Relative singular value cutoff");
    s->add_flag("--amplitude", ga.amplitude, "Project the outputs on |0...0>");
    s = gen_sub("wmc", "Weighted model counting network from DIMACS CNF");
    s->add_option("--cnf", ga.cnf, "CNF file")->required();
    s = gen_sub("qaoa", "One MAX-CUT energy term on a random 3-regular graph");
    s->add_option("--n", ga.n, "Vertices");
    s->add_option("--k", ga.k, "Degree");
    s->add_option("--p", ga.p, "Layers");
    s->add_option("--edge", ga.edge, "Edge index of the term");
    s->add_option("--gammas", ga.gammas, "Cost angles")->delimiter(',');
    s->add_option("--betas", ga.betas, "Mixer angles")->delimiter(',');
    s = gen_sub("einsum", "Network from einsum subscripts");
    s->add_option("--spec", ga.spec, "Subscripts, e.g. ab,bc->ac")->required();
    s->add_option("--shapes", ga.shapes, "Shapes, e.g. 2,4;4,8")->required();
    s->add_flag("--no-data", ga.no_data, "Structure only");
  }

  // simplify
  CLI::App* simp = app.add_subcommand("simplify", "Run the simplification passes to a fixed point");
  SimplifyArgs sa;
  simp->add_option("-i,--in", sa.in, "Input network")->required();
  simp->add_option("-o,--out", sa.out, "Simplified network")->required();
  simp->add_option("--report", sa.report, "Report JSON (default <out>.report.json)");
  simp->add_flag("--no-diagonal", sa.no_diagonal, "Skip diagonal reduction");
  simp->add_option("--max-cycles", sa.max_cycles, "Cycle limit");
  simp->add_option("--rel-tol", sa.rel_tol, "Zero and rank tolerance");

  // optimize
  CLI::App* opt = app.add_subcommand("optimize", "Search for a contraction tree");
  OptimizeArgs oa;
  opt->add_option("-i,--in", oa.in, "Input network")->required();
  opt->add_option("-o,--out", oa.out, "PathReport JSON")->required();
  opt->add_option("--network-out", oa.network_out, "Simplified network (default <out>.network.json)");
  opt->add_option("--trial-log", oa.trial_log, "Trial log (JSON lines)");
  opt->add_option("--target", oa.target, "width, cost or sliced-cost");
  opt->add_option("--slice-width", oa.slice_width, "Slicing target W_s for sliced-cost");
  opt->add_option("--budget", oa.budget, "Shots");
  opt->add_option("--seconds", oa.seconds, "Wall-clock budget");
  opt->add_option("--parallelism", oa.parallelism, "Concurrent trials")->envname("TNPATH_PARALLELISM");
  opt->add_option("--seed", oa.seed, "Master seed");
  opt->add_option("--drivers", oa.drivers, "Comma-separated: greedy,gn,partition,minfill,dp");
  opt->add_flag("--no-simplify", oa.no_simplify, "Skip simplification");
  opt->add_flag("--no-timing", oa.no_timing, "Omit seconds from the trial log");

  // slice
  CLI::App* sl = app.add_subcommand("slice", "Choose indices to slice");
  SliceArgs la;
  sl->add_option("-i,--in", la.in, "Network")->required();
  sl->add_option("-p,--path", la.path, "Path or PathReport JSON")->required();
  sl->add_option("--target-width", la.target_width, "Per-slice width target")->required();
  sl->add_option("-o,--out", la.out, "SliceSet JSON");
  sl->add_option("--restarts", la.restarts, "Greedy restarts");
  sl->add_option("--noise", la.noise, "Candidate score noise");
  sl->add_option("--seed", la.seed, "Seed");

  // contract
  CLI::App* con = app.add_subcommand("contract", "Contract a network along a path");
  ContractArgs ca;
  con->add_option("-i,--in", ca.in, "Network")->required();
  con->add_option("-p,--path", ca.path, "Path or PathReport JSON")->required();
  con->add_option("--slices", ca.slices, "SliceSet or PathReport JSON with sliced labels");
  con->add_option("-o,--out", ca.out, "Result JSON");
  con->add_flag("--strip-exponent", ca.strip, "Track a separate exponent");
  con->add_option("--parallelism", ca.parallelism, "Slice workers")->envname("TNPATH_PARALLELISM");

  // bench
  CLI::App* bench = app.add_subcommand("bench", "Benchmark drivers over a family of networks");
  BenchArgs ba;
  bench->add_option("--family", ba.family, "regular, planar, lattice, circuit or qaoa");
  bench->add_option("--n-min", ba.n_min, "Smallest size");
  bench->add_option("--n-max", ba.n_max, "Largest size");
  bench->add_option("--n-step", ba.n_step, "Size step");
  bench->add_option("--param", ba.param, "Degree k, circuit depth or QAOA p");
  bench->add_option("--instances", ba.instances, "Instances per size");
  bench->add_option("--drivers", ba.drivers, "Comma-separated drivers, one row each");
  bench->add_option("--target", ba.target, "width or cost");
  bench->add_option("--budget", ba.budget, "Shots per driver and instance");
  bench->add_option("--seconds", ba.seconds, "Wall-clock budget per driver and instance");
  bench->add_option("--parallelism", ba.parallelism, "Concurrent trials")->envname("TNPATH_PARALLELISM");
  bench->add_option("--seed", ba.seed, "Master seed");
  bench->add_option("-o,--out", ba.out, "CSV file ('-' for stdout)");
  bench->add_flag("--no-timing", ba.no_timing, "Write 0 in the seconds column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      const TensorNetwork tn = run_gen(gen_kind, ga);
      write_text(network_to_json(tn).dump(2) + "\n", ga.out);
      return 0;
    }
    if (simp->parsed()) return cmd_simplify(sa);
    if (opt->parsed()) return cmd_optimize(oa);
    if (sl->parsed()) return cmd_slice(la);
    if (con->parsed()) return cmd_contract(ca);
    if (bench->parsed()) return cmd_bench(ba);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 4;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
