// Copyright 2026 The bosloc Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "bosloc/csv.h"
#include "cli.h"

namespace bosloc {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bosloc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string preset(const std::string& name) {
  return (fs::path(BOSLOC_PRESET_DIR) / name).string();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bosloc_cli_" + name);
  fs::remove_all(p);
  return p;
}

TEST(Cli, OracleFreeValues) {
  const CliRun r = cli({"oracle", "--levels", "0.5,1.0", "--beta", "1", "--mu", "0", "--lambda", "0"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("1.5414940"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("0.5819767"), std::string::npos) << r.out;
}

TEST(Cli, OracleWritesCsv) {
  const fs::path out = fresh_dir("oracle");
  const CliRun r = cli({"--out", out.string(), "oracle", "--sweep", "5", "--seed", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  const std::string csv = read_text_file(out / "oracle.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 5 * 4);
}

TEST(Cli, ScheduleSequence) {
  const CliRun r = cli({"schedule", "--l1", "3", "--alpha", "1.5", "--k", "4"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "3\n7\n19\n83\n");
}

TEST(Cli, UnknownFlagIsUsageError) {
  const CliRun r = cli({"spectrum", "--frobnicate"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, MissingSubcommandIsUsageError) {
  EXPECT_EQ(cli({}).code, 1);
}

TEST(Cli, HelpSucceeds) {
  const CliRun r = cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("scaling"), std::string::npos);
}

TEST(Cli, ConfigErrors) {
  EXPECT_EQ(cli({"spectrum"}).code, 1);
  EXPECT_EQ(cli({"spectrum", "--config", "/nonexistent.cfg"}).code, 1);
  const fs::path dir = fresh_dir("badcfg");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.cfg") << "[experiment]\nscales = 8\nlevels = 2\nbogus = 1\n";
  const CliRun r = cli({"spectrum", "--config", (dir / "bad.cfg").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bogus"), std::string::npos);
  EXPECT_EQ(cli({"schedule", "--l1", "4", "--alpha", "1.5", "--k", "3"}).code, 1);
}

TEST(Cli, NumericalFailureExitCode) {
  const CliRun r = cli({"oracle", "--levels", "0.01,0.02", "--beta", "1", "--mu", "0", "--nmax", "5"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, IoFailureExitCode) {
  const fs::path dir = fresh_dir("io");
  fs::create_directories(dir);
  std::ofstream(dir / "blocker") << "x";
  const CliRun r = cli({"spectrum", "--config", preset("small1d.cfg"), "--out",
                     (dir / "blocker" / "run").string()});
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST(Cli, ScalingDeterministicAcrossThreads) {
  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  const CliRun ra = cli({"scaling", "--config", preset("small1d.cfg"), "--seed", "7", "--out",
                      a.string(), "--threads", "1"});
  const CliRun rb = cli({"scaling", "--config", preset("small1d.cfg"), "--seed", "7", "--out",
                      b.string(), "--threads", "3"});
  ASSERT_EQ(ra.code, 0) << ra.err;
  ASSERT_EQ(rb.code, 0) << rb.err;
  for (const char* f : {"spectrum.csv", "occupations.csv", "kinetic.csv", "localization.csv",
                        "scaling.csv", "failures.csv"}) {
    EXPECT_EQ(read_text_file(a / f), read_text_file(b / f)) << f;
  }
}

TEST(Cli, SeedOverrideChangesRealizations) {
  const fs::path a = fresh_dir("seed_a");
  const fs::path b = fresh_dir("seed_b");
  ASSERT_EQ(cli({"spectrum", "--config", preset("small1d.cfg"), "--seed", "1", "--out", a.string()}).code, 0);
  ASSERT_EQ(cli({"spectrum", "--config", preset("small1d.cfg"), "--seed", "2", "--out", b.string()}).code, 0);
  EXPECT_NE(read_text_file(a / "spectrum.csv"), read_text_file(b / "spectrum.csv"));
  EXPECT_FALSE(fs::exists(a / "occupations.csv"));
}

TEST(Cli, SubcommandsProduceTheirTables) {
  const fs::path out = fresh_dir("subs");
  ASSERT_EQ(cli({"gas", "--config", preset("small1d.cfg"), "--out", out.string()}).code, 0);
  EXPECT_TRUE(fs::exists(out / "occupations.csv"));
  ASSERT_EQ(cli({"overlap", "--config", preset("small1d.cfg"), "--out", out.string()}).code, 0);
  EXPECT_TRUE(fs::exists(out / "kinetic.csv"));
  ASSERT_EQ(cli({"localize", "--config", preset("small1d.cfg"), "--out", out.string()}).code, 0);
  EXPECT_TRUE(fs::exists(out / "localization.csv"));
  ASSERT_EQ(cli({"goodbox", "--config", preset("small1d.cfg"), "--out", out.string()}).code, 0);
  EXPECT_TRUE(fs::exists(out / "goodbox.csv"));
  ASSERT_EQ(cli({"ids", "--config", preset("small1d.cfg"), "--out", out.string(),
                 "--realizations", "2"}).code, 0);
  EXPECT_NE(read_text_file(out / "ids.csv").find(",2\n"), std::string::npos);
  const CliRun s = cli({"scaling", "--config", preset("small1d.cfg"), "--out", out.string(),
                     "--json-summary", (out / "summary.json").string(), "--refine"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_TRUE(fs::exists(out / "summary.json"));
  EXPECT_TRUE(fs::exists(out / "refine.csv"));
}

}  // namespace
}  // namespace bosloc
