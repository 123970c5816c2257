/*
 * Copyright 2026 The smd Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "smd/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace smd {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "smd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = (std::filesystem::temp_directory_path() / ("smd_cli_" + name)).string();
  std::ofstream(path) << text;
  return path;
}

TEST(Verify, SkewEightThreeIsDominant) {
  const Outcome o = run_cli({"verify", "--family", "skew", "--n", "8", "--r", "3", "--seed", "7"});
  EXPECT_EQ(o.code, 0) << o.err;
  const Json j = o.json();
  EXPECT_EQ(j["d_estimate"], 64);
  EXPECT_EQ(j["dominant"], true);
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["trials"], 5);
}

TEST(Verify, NotDominantExitsThree) {
  const Outcome o = run_cli({"verify", "--family", "skew", "--n", "4", "--r", "4", "--trials", "5", "--tol", "1e-8",
                             "--seed", "7"});
  EXPECT_EQ(o.code, 3);
  EXPECT_EQ(o.json()["d_estimate"], 15);
}

TEST(Verify, OddSkewDefaultsToDetTarget) {
  const Outcome o = run_cli({"verify", "--family", "skew", "--n", "5", "--r", "3"});
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.json()["target"], "det");
  EXPECT_EQ(o.json()["target_dim"], 24);
}

TEST(Verify, ByteIdenticalForSameSeed) {
  const std::vector<std::string> args{"verify", "--family", "toeplitz", "--n", "4", "--r", "2", "--seed", "3"};
  EXPECT_EQ(run_cli(args).out, run_cli(args).out);
}

TEST(Table, AllRowsMatch) {
  const Outcome o = run_cli({"table"});
  EXPECT_EQ(o.code, 0) << o.out;
  const Json j = o.json();
  EXPECT_EQ(j["all_match"], true);
  EXPECT_EQ(j["skew"].size(), skew_dimension_table().size());
  EXPECT_EQ(j["summary"][3]["arbitrary_r"], 33);
}

TEST(Decompose, ConvergedAndNotConverged) {
  Rng rng(4);
  const std::string in = write_temp("target.json", matrix_to_json(complex_gaussian_matrix(rng, 4, 4)).dump());
  const Outcome ok = run_cli({"decompose", "--in", in, "--chain", "orthogonal,upper"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  const FactorChain chain = chain_from_json(ok.json());
  EXPECT_TRUE(chain.converged);
  EXPECT_EQ(chain.factors.size(), 2u);

  const std::string opts = write_temp("opts.json", R"({"max_iterations": 3, "restarts": 0})");
  const Outcome slow = run_cli({"decompose", "--in", in, "--chain", "skew,skew,skew", "--opts", opts});
  EXPECT_EQ(slow.code, 4);
  EXPECT_FALSE(chain_from_json(slow.json()).converged);
}

TEST(Decompose, CsvInputAndOrderSuffix) {
  const std::string in = write_temp("target.csv", "1,2,0\n3,4,5\n0,6,7\n");
  const Outcome o = run_cli({"decompose", "--in", in, "--chain", "kdiagonal:2"});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.json()["problem"]["factors"][0]["order"], 2);
}

TEST(Decompose, InfeasibleIsAUsageError) {
  const std::string in = write_temp("three.csv", "1,2,3\n4,5,6\n7,8,10\n");
  EXPECT_EQ(run_cli({"decompose", "--in", in, "--chain", "diagonal,diagonal"}).code, 1);
}

TEST(Companion, CounterexampleExitsFive) {
  const std::string in = write_temp("counter.csv", "0,1,2\n3,4,5\n6,7,9\n");
  const Outcome o = run_cli({"companion", "--in", in});
  EXPECT_EQ(o.code, 5);
  EXPECT_EQ(o.json()["failed_column"], 2);
  EXPECT_EQ(o.json()["status"], "no-solution");

  const std::string good = write_temp("good.csv", "1,2\n3,4\n");
  const Outcome u = run_cli({"companion", "--in", good});
  EXPECT_EQ(u.code, 0);
  EXPECT_EQ(u.json()["status"], "unique");
}

TEST(Bounds, SpecExamples) {
  const Json skew = run_cli({"bounds", "--family", "skew", "--n", "5"}).json();
  EXPECT_EQ(skew["lower_bound"], 3);
  EXPECT_EQ(skew["surjectivity_bound"], 13);
  const Json st = run_cli({"bounds", "--family", "toeplitz-sym", "--n", "7"}).json();
  EXPECT_EQ(st["lower_bound"], 4);
  EXPECT_EQ(st["target"], "centro");
  const Json comp = run_cli({"bounds", "--family", "companion", "--n", "6"}).json();
  EXPECT_EQ(comp["lower_bound"], 6);
  EXPECT_EQ(comp["surjectivity_bound"], 25);
}

TEST(Sample, CompanionMatrixFile) {
  const Outcome o = run_cli({"sample", "--family", "companion", "--n", "3", "--seed", "1"});
  EXPECT_EQ(o.code, 0);
  const ComplexMatrix m = matrix_from_json(o.json());
  EXPECT_TRUE(is_member(make_family(FamilyKind::of(FamilyTag::Companion), 3), m, 0.0));
  EXPECT_EQ(o.out, run_cli({"sample", "--family", "companion", "--n", "3", "--seed", "1"}).out);
}

TEST(ExitCodes, UsageAndIo) {
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"verify", "--family", "skew"}).code, 1);
  EXPECT_EQ(run_cli({"verify", "--family", "nonsense", "--n", "3", "--r", "2"}).code, 1);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
  EXPECT_EQ(run_cli({"companion", "--in", "/nonexistent/file.json"}).code, 2);
  const std::string bad = write_temp("bad.json", "{\"n\": 2, \"entries\": [");
  EXPECT_EQ(run_cli({"companion", "--in", bad}).code, 2);
  EXPECT_EQ(run_cli({"verify", "--family", "kdiagonal:9", "--n", "3", "--r", "2"}).code, 1);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

#ifdef SMD_CLI_PATH
TEST(Binary, ExitStatusPropagates) {
  const std::string counter = write_temp("bin_counter.csv", "0,1\n1,1\n");
  const std::string cmd = std::string(SMD_CLI_PATH) + " companion --in " + counter + " > /dev/null";
  const int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 5);
}
#endif

}  // namespace
}  // namespace smd
