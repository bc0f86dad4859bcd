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

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support/oracles.hpp"
#include "tnpath/drivers.hpp"
#include "tnpath/executor.hpp"
#include "tnpath/hypergraph.hpp"
#include "tnpath/io.hpp"

using namespace tnpath;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tnpath_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args, const std::string& env = "") const {
    const std::string cmd = env + (env.empty() ? "" : " ") + TNPATH_CLI_PATH + " " + args + " >" +
                            path("stdout.txt") + " 2>" + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenWritesValidNetwork) {
  ASSERT_EQ(run("gen regular --n 10 --k 3 --seed 1 -o " + path("g.json")), 0);
  const TensorNetwork tn = load_network(path("g.json"));
  EXPECT_EQ(tn.nodes.size(), 10u);
  EXPECT_EQ(tn.num_shared_labels(), 15);
  EXPECT_TRUE(validate(tn).empty());
  ASSERT_EQ(run("gen regular --n 10 --k 3 --seed 1 -o " + path("h.json")), 0);
  EXPECT_EQ(slurp(path("g.json")), slurp(path("h.json")));
}

TEST_F(Cli, UsageErrorsExitTwo) {
  ASSERT_EQ(run("gen regular --n 10 --k 3 -o " + path("g.json")), 0);
  EXPECT_EQ(run("optimize -i " + path("g.json") + " -o " + path("r.json") + " --budget 0"), 2);
  EXPECT_EQ(run("optimize -i " + path("g.json")), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("gen regular --n 5 --k 3"), 2);
  EXPECT_EQ(run("optimize -i " + path("g.json") + " -o " + path("r.json") + " --target fast"), 2);
  EXPECT_EQ(run("bench --n-min 30 --n-max 20 -o " + path("b.csv")), 2);
}

TEST_F(Cli, DataErrorsExitFour) {
  std::ofstream(path("bad.json")) << "{ not json";
  EXPECT_EQ(run("optimize -i " + path("bad.json") + " -o " + path("r.json")), 4);
  EXPECT_EQ(run("optimize -i " + path("missing.json") + " -o " + path("r.json")), 4);
  std::ofstream(path("bad.cnf")) << "p cnf 2 1\n1 3 0\n";
  EXPECT_EQ(run("gen wmc --cnf " + path("bad.cnf")), 4);
}

TEST_F(Cli, NumericErrorExitsFive) {
  TensorNetwork tn;
  for (int i = 0; i < 2; ++i) {
    TensorNode n;
    n.id = i;
    n.indices = {"a"};
    n.data = std::vector<Complex>{1e300, 1e300};
    tn.nodes.push_back(n);
  }
  tn.index_dims["a"] = 2;
  save_network(tn, path("big.json"));
  std::ofstream(path("p.json")) << R"({"format": "ssa", "num_leaves": 2, "path": [[0, 1]]})";
  EXPECT_EQ(run("contract -i " + path("big.json") + " -p " + path("p.json")), 5);
  EXPECT_EQ(run("contract --strip-exponent -i " + path("big.json") + " -p " + path("p.json") + " -o " +
                path("c.json")),
            0);
  const Json c = read_json(path("c.json"));
  const double log10_value =
      std::log10(std::hypot(c["value"][0][0].get<double>(), c["value"][0][1].get<double>())) +
      c["exponent10"].get<double>();
  EXPECT_NEAR(log10_value, std::log10(2.0) + 600.0, 1e-9);
}

TEST_F(Cli, OptimizeIsByteIdenticalAndNearOptimal) {
  ASSERT_EQ(run("gen regular --n 10 --k 3 --dim 3 --seed 4 -o " + path("g.json")), 0);
  const std::string base = "optimize -i " + path("g.json") + " --budget 64 --seed 9 --target cost --no-simplify";
  ASSERT_EQ(run(base + " --no-timing --trial-log " + path("t1.jsonl") + " -o " + path("r1.json")), 0);
  ASSERT_EQ(run(base + " --no-timing --trial-log " + path("t2.jsonl") + " -o " + path("r2.json")), 0);
  EXPECT_EQ(slurp(path("r1.json")), slurp(path("r2.json")));
  EXPECT_EQ(slurp(path("t1.jsonl")), slurp(path("t2.jsonl")));
  EXPECT_EQ(slurp(path("r1.json.network.json")), slurp(path("r2.json.network.json")));

  const Json r = read_json(path("r1.json"));
  for (const char* key : {"driver", "params", "seed", "trial", "trials_run", "score", "metrics",
                          "best_so_far", "path"}) {
    EXPECT_TRUE(r.contains(key)) << key;
  }
  const Hypergraph hg = Hypergraph::from_network(load_network(path("g.json")));
  const double dp = metrics(optimal_dp(hg, Target::kCost), hg).log10_cost;
  EXPECT_LE(std::abs(r["metrics"]["log10_C"].get<double>() - dp), 0.1);

  int lines = 0;
  std::ifstream log(path("t1.jsonl"));
  for (std::string line; std::getline(log, line); ++lines) {
    const Json t = Json::parse(line);
    EXPECT_EQ(t["index"].get<int>(), lines);
  }
  EXPECT_EQ(lines, 64);
}

TEST_F(Cli, OptimizeContractAndSlice) {
  ASSERT_EQ(run("gen circuit --rows 3 --cols 3 --depth 6 --seed 2 --amplitude -o " + path("c.json")), 0);
  ASSERT_EQ(run("optimize -i " + path("c.json") + " -o " + path("r.json") + " --budget 16 --seed 1"), 0);
  const std::string net = path("r.json.network.json");
  const TensorNetwork simplified = load_network(net);
  const Json r = read_json(path("r.json"));

  ASSERT_EQ(run("contract -i " + net + " -p " + path("r.json") + " -o " + path("v.json")), 0);
  const Json v = read_json(path("v.json"));
  const Complex value(v["value"][0][0].get<double>(), v["value"][0][1].get<double>());
  const double scale = std::pow(10.0, v["exponent10"].get<double>());
  const TensorNetwork original = load_network(path("c.json"));
  const ContractionTree tree = greedy_sample(Hypergraph::from_network(original), {}, 0);
  const ContractResult direct = contract(original, tree);
  const Complex expected = direct.value.data[0] * std::pow(10.0, direct.exponent10);
  EXPECT_LT(std::abs(value * scale - expected), 1e-10 * std::max(1.0, std::abs(expected)));
  EXPECT_NEAR(std::log10(v["op_count"].get<double>()), r["metrics"]["log10_C"].get<double>(), 1e-9);

  const double w = r["metrics"]["W"].get<double>();
  const Hypergraph hg = Hypergraph::from_network(simplified);
  const double target = std::max(hg.max_leaf_log2(), w - 2.0);
  std::ostringstream t;
  t << target;
  ASSERT_EQ(run("slice -i " + net + " -p " + path("r.json") + " --target-width " + t.str() + " -o " +
                path("s.json")),
            0);
  const Json s = read_json(path("s.json"));
  EXPECT_TRUE(s["bounds_ok"].get<bool>());
  EXPECT_LE(s["Ws"].get<double>(), target + 1e-9);

  ASSERT_EQ(run("contract -i " + net + " -p " + path("r.json") + " --slices " + path("s.json") + " -o " +
                path("vs.json")),
            0);
  const Json vs = read_json(path("vs.json"));
  const Complex sliced(vs["value"][0][0].get<double>(), vs["value"][0][1].get<double>());
  EXPECT_LT(std::abs(sliced * std::pow(10.0, vs["exponent10"].get<double>()) - expected),
            1e-10 * std::max(1.0, std::abs(expected)));

  EXPECT_EQ(run("slice -i " + net + " -p " + path("r.json") + " --target-width 0.5"), 3);
}

TEST_F(Cli, SlicedCostTarget) {
  ASSERT_EQ(run("gen regular --n 24 --k 3 --no-data --seed 3 -o " + path("g.json")), 0);
  ASSERT_EQ(run("optimize -i " + path("g.json") + " -o " + path("r.json") +
                " --target sliced-cost --slice-width 4 --budget 8"),
            0);
  const Json r = read_json(path("r.json"));
  ASSERT_TRUE(r.contains("sliced"));
  EXPECT_LE(r["sliced"]["Ws"].get<double>(), 4.0 + 1e-9);
  EXPECT_EQ(run("optimize -i " + path("g.json") + " -o " + path("r.json") +
                " --target sliced-cost --slice-width 1 --budget 8"),
            3);
}

TEST_F(Cli, SimplifyWritesReport) {
  ASSERT_EQ(run("gen circuit --rows 2 --cols 3 --depth 4 --seed 5 -o " + path("c.json")), 0);
  ASSERT_EQ(run("simplify -i " + path("c.json") + " -o " + path("s.json")), 0);
  const Json rep = read_json(path("s.json.report.json"));
  EXPECT_GT(rep["hyperedges_after"].get<int>(), 0);
  EXPECT_TRUE(validate(load_network(path("s.json"))).empty());
}

TEST_F(Cli, BenchRowsHeaderAndDeterminism) {
  const std::string args = "bench --family regular --n-min 20 --n-max 50 --n-step 10 --instances 2 "
                           "--budget 2 --seed 3 --no-timing -o ";
  ASSERT_EQ(run(args + path("a.csv")), 0);
  ASSERT_EQ(run(args + path("b.csv")), 0);
  const std::string a = slurp(path("a.csv"));
  EXPECT_EQ(a, slurp(path("b.csv")));
  std::istringstream in(a);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "family,n,param,driver,seed,W,log10_C,seconds");
  int rows = 0;
  for (std::string line; std::getline(in, line); ++rows) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7) << line;
    EXPECT_EQ(std::stod(line.substr(line.rfind(',') + 1)), 0.0);
  }
  EXPECT_EQ(rows, 4 * 2 * 4);
}

TEST_F(Cli, ConfigFileAndEnvironment) {
  ASSERT_EQ(run("gen regular --n 12 --k 3 --no-data --seed 2 -o " + path("g.json")), 0);
  std::ofstream(path("cfg.toml")) << "[optimize]\nbudget = 5\nseed = 4\n";
  ASSERT_EQ(run("--config " + path("cfg.toml") + " optimize -i " + path("g.json") + " -o " + path("r.json")), 0);
  EXPECT_EQ(read_json(path("r.json"))["trials_run"].get<int>(), 5);
  std::ofstream(path("zero.toml")) << "[optimize]\nbudget = 0\n";
  EXPECT_EQ(run("--config " + path("zero.toml") + " optimize -i " + path("g.json") + " -o " + path("r.json")), 2);
  ASSERT_EQ(run("optimize --budget 6 -i " + path("g.json") + " -o " + path("r.json"), "TNPATH_PARALLELISM=3"), 0);
  EXPECT_EQ(read_json(path("r.json"))["trials_run"].get<int>(), 6);
}

TEST_F(Cli, InputsNotMutated) {
  ASSERT_EQ(run("gen circuit --rows 2 --cols 2 --depth 3 --seed 1 -o " + path("c.json")), 0);
  const std::string before = slurp(path("c.json"));
  ASSERT_EQ(run("optimize -i " + path("c.json") + " -o " + path("r.json") + " --budget 4"), 0);
  ASSERT_EQ(run("simplify -i " + path("c.json") + " -o " + path("s.json")), 0);
  EXPECT_EQ(slurp(path("c.json")), before);
}
