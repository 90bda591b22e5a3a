// Copyright 2026 The dpsem Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
};

// Runs the CLI through the shell with stderr folded into the captured output.
Result RunCli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" + std::string(DPSEM_CLI_PATH) + "' " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  EXPECT_NE(p, nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("dpsem_cli_test_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, CurveMatchesGolden) {
  const Result r = RunCli("curve pbdp-gaussian --rho 2.63 --grid 1e-6:0.5:200:log --out " +
                       Path("p.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(Slurp(Path("p.csv")),
            Slurp(std::string(DPSEM_GOLDEN_DIR) + "/fig1/pbdp-gaussian.csv"));
  ASSERT_EQ(RunCli("curve zcdp-bound --rho 2.63 --out " + Path("z.csv")).code, 0);
  EXPECT_EQ(Slurp(Path("z.csv")),
            Slurp(std::string(DPSEM_GOLDEN_DIR) + "/fig1/zcdp-bound.csv"));
}

TEST_F(CliTest, SvgEmbedsTheCsvPoints) {
  ASSERT_EQ(RunCli("curve adp-gaussian --rho 2.63 --out " + Path("a.csv")).code, 0);
  ASSERT_EQ(RunCli("curve adp-gaussian --rho 2.63 --format svg --out " + Path("a.svg")).code, 0);
  EXPECT_NE(Slurp(Path("a.svg")).find(Slurp(Path("a.csv"))), std::string::npos);
}

TEST_F(CliTest, DiagonalPureCurve) {
  const Result r = RunCli("curve tradeoff-pure --eps 0 --grid 0:1:5");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "level,power\n0,0\n0.25,0.25\n0.5,0.5\n0.75,0.75\n1,1\n");
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(RunCli("curve no-such-kind --rho 1").code, 2);
  EXPECT_EQ(RunCli("curve zcdp-bound").code, 2);
  EXPECT_EQ(RunCli("curve zcdp-bound --rho 1 --grid 0:1").code, 2);
  EXPECT_EQ(RunCli("curve zcdp-bound --rho 1 --format png").code, 2);
  EXPECT_EQ(RunCli("--no-such-flag").code, 2);
  EXPECT_EQ(RunCli("scenario Q").code, 2);
  EXPECT_EQ(RunCli("mc elsewhere --n 1000").code, 2);
  EXPECT_EQ(RunCli("convert zcdp-to-delta --rho 0 --eps 1").code, 2);

  std::ofstream(Path("file")) << "x";
  EXPECT_EQ(RunCli("curve zcdp-bound --rho 1 --out " + Path("file") + "/x.csv").code, 3);
  EXPECT_EQ(RunCli("scenario file:" + Path("missing.txt")).code, 3);
  // A bare name that is neither a builtin nor a file is a usage error.
  EXPECT_EQ(RunCli("scenario " + Path("missing.txt")).code, 2);
  EXPECT_EQ(RunCli("mc production --n 1000 --table " + Path("missing.txt")).code, 3);
}

TEST_F(CliTest, Tables) {
  const Result r = RunCli("tables");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("0.136"), std::string::npos);
  EXPECT_NE(r.out.find("0.082"), std::string::npos);
  EXPECT_NE(r.out.find("0.7417"), std::string::npos);
  EXPECT_NE(r.out.find("0.9474"), std::string::npos);
  EXPECT_NE(r.out.find("0.2092"), std::string::npos);
  EXPECT_NE(r.out.find("0.2404"), std::string::npos);
}

TEST_F(CliTest, Scenarios) {
  Result r = RunCli("scenario B");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("rho = 0.92"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("power@0.05 = 0.388"), std::string::npos) << r.out;

  r = RunCli("scenario F --out " + Path("f.csv"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("power@0.10 = 0.409"), std::string::npos) << r.out;
  EXPECT_EQ(Slurp(Path("f.csv")).rfind("delta,eps\n", 0), 0u);

  std::ofstream(Path("empty.txt")) << "name: nothing\n# no cells\n";
  r = RunCli("scenario " + Path("empty.txt"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("rho = 0 "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("power@0.05 = 0.0500"), std::string::npos) << r.out;
}

TEST_F(CliTest, McIsDeterministicAndWritesManifest) {
  ASSERT_EQ(RunCli("mc scenario:A --n 5000 --seed 3 --threads 1 --out " + Path("a.csv")).code, 0);
  ASSERT_EQ(RunCli("mc scenario:A --n 5000 --seed 3 --threads 2 --out " + Path("b.csv")).code, 0);
  EXPECT_EQ(Slurp(Path("a.csv")), Slurp(Path("b.csv")));
  const std::string csv = Slurp(Path("a.csv"));
  EXPECT_EQ(csv.rfind("level,power,se\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1002);

  const auto m = nlohmann::json::parse(Slurp(Path("a.csv.manifest.json")));
  EXPECT_EQ(m["seed"], 3);
  EXPECT_EQ(m["n_samples"], 5000);
  EXPECT_EQ(m["allocation"], "scenario:A");
  EXPECT_FALSE(m["table_digest"].get<std::string>().empty());

  ASSERT_EQ(RunCli("mc scenario:A --n 5000 --seed 4 --out " + Path("c.csv")).code, 0);
  EXPECT_NE(Slurp(Path("a.csv")), Slurp(Path("c.csv")));
}

TEST_F(CliTest, OutDirEnvironment) {
  const Result r = RunCli("curve zcdp-bound --rho 1", "DPSEM_OUT_DIR='" + dir_.string() + "'");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir_ / "zcdp-bound.csv"));
  // An explicit --out wins over the environment.
  ASSERT_EQ(RunCli("curve zcdp-bound --rho 1 --out " + Path("explicit.csv"),
                "DPSEM_OUT_DIR='" + (dir_ / "other").string() + "'")
                .code,
            0);
  EXPECT_TRUE(fs::exists(dir_ / "explicit.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "other"));
}

TEST_F(CliTest, AllocationRoundTrip) {
  ASSERT_EQ(RunCli("allocation --out " + Path("alloc.txt")).code, 0);
  const Result r = RunCli("scenario A --table " + Path("alloc.txt"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("37477407/336118000"), std::string::npos) << r.out;

  std::string text = Slurp(Path("alloc.txt"));
  text.replace(text.find("person = 64/25"), 14, "persn = 64/25");
  std::ofstream(Path("bad.txt")) << text;
  EXPECT_EQ(RunCli("scenario A --table " + Path("bad.txt")).code, 2);
}

TEST_F(CliTest, Odometer) {
  const std::string ledger = " --ledger " + Path("ledger.tsv");
  ASSERT_EQ(RunCli("odometer --cap 2.63" + ledger).code, 0);
  EXPECT_EQ(RunCli("odometer --label persons --rho 2.56" + ledger).code, 0);
  EXPECT_EQ(RunCli("odometer --label housing --rho 0.07" + ledger).code, 0);
  const Result refused = RunCli("odometer --label extra --rho 0.01" + ledger);
  EXPECT_NE(refused.code, 0);
  EXPECT_NE(refused.out.find("refused"), std::string::npos);
  const std::string text = Slurp(Path("ledger.tsv"));
  EXPECT_EQ(text.rfind("# cap\t2.6", 0), 0u);
  EXPECT_NE(text.find("persons\t2.56"), std::string::npos);
  EXPECT_EQ(text.find("extra"), std::string::npos);
}

TEST_F(CliTest, Convert) {
  Result r = RunCli("convert gaussian-pbdp --rho 2.63 --delta 0.1");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(std::stod(r.out), 6.3475671317475379);
  r = RunCli("convert zcdp-to-delta --rho 1 --eps 3");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(std::stod(r.out), 0.36787944117144233, 1e-16);
  r = RunCli("convert rdp-to-delta --points 2:1 --eps 3");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(std::stod(r.out), 0.1353352832366127, 1e-16);
  r = RunCli("convert bayes-known-rest --points 2:1 --eps 3");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(std::stod(r.out), 0.006737946999085467, 1e-17);
  EXPECT_EQ(RunCli("convert rdp-to-delta --points 2-1 --eps 3").code, 2);
}

}  // namespace
