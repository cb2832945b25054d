/*
 * Copyright (c) 2026, The mpath Authors. All rights reserved.
 *
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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "mpath/cli.hpp"

using namespace mpath;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args, std::map<std::string, std::string> env = {}) {
  std::ostringstream out, err;
  EnvLookup lookup = [env](const std::string& k) -> std::optional<std::string> {
    auto it = env.find(k);
    if (it == env.end()) return std::nullopt;
    return it->second;
  };
  int code = run_cli(args, lookup, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("mpath_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Cli, TopoValidatePresetAndFile) {
  EXPECT_EQ(run({"topo", "validate", "beluga"}).code, 0);
  EXPECT_EQ(run({"topo", "validate", MPATH_SOURCE_DIR "/presets/narval.topo"}).code, 0);
  auto bad = run({"topo", "validate", "/nonexistent.topo"});
  EXPECT_NE(bad.code, 0);
  EXPECT_NE(bad.err.find("nonexistent"), std::string::npos);
}

TEST(Cli, UnknownFlagFailsWithOneLine) {
  auto r = run({"bench", "bw", "--bogus"});
  EXPECT_NE(r.code, 0);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, InvalidConfigNamesCause) {
  auto r = run({"bench", "bw", "--gpu-paths", "0"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("--gpu-paths"), std::string::npos);
  auto h = run({"bench", "bw", "--host", "sometimes"});
  EXPECT_NE(h.code, 0);
}

TEST(Cli, FlagsOverrideEnv) {
  std::map<std::string, std::string> env{{"MP_NUM_GPU_PATHS", "3"}, {"MP_MAX_CHUNKS", "4"}};
  auto from_env = run({"bench", "bw", "--sizes", "8M"}, env);
  ASSERT_EQ(from_env.code, 0) << from_env.err;
  EXPECT_NE(from_env.out.find("omb_bw,beluga,8388608,1,3,off,off,4,"), std::string::npos) << from_env.out;
  auto flagged = run({"bench", "bw", "--sizes", "8M", "--gpu-paths", "2", "--chunks", "2"}, env);
  EXPECT_NE(flagged.out.find("omb_bw,beluga,8388608,1,2,off,off,2,"), std::string::npos) << flagged.out;
}

TEST(Cli, BenchBwHasSpeedupColumn) {
  auto r = run({"bench", "bw", "--topology", "beluga", "--sizes", "1M..8M", "--gpu-paths", "3", "--host", "on",
                "--graph", "on", "--window", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("benchmark,topology,size,window,gpu_paths,host,graph_mode,chunks,metric,value,speedup\n", 0),
            0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1 + 4 * 2);
}

TEST(Cli, OverheadCsv) {
  auto r = run({"overhead", "--nodes", "2..34", "--mode", "graph"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("nodes,iteration,phase,cost,fraction\n", 0), 0u);
  EXPECT_NE(r.out.find("34,first,instantiation,"), std::string::npos);
  EXPECT_NE(run({"overhead", "--mode", "eager"}).code, 0);
}

TEST(Cli, SimulateThenVerify) {
  const auto graph = temp_path("graph.txt");
  const auto timeline = temp_path("timeline.csv");
  auto s = run({"simulate", "--size", "16M", "--gpu-paths", "3", "--host", "on", "--chunks", "4", "--graph", "on",
                "--dump-graph", graph, "--output", timeline});
  ASSERT_EQ(s.code, 0) << s.err;
  auto v = run({"verify", "--graph", graph, "--timeline", timeline});
  EXPECT_EQ(v.code, 0) << v.out << v.err;
  EXPECT_EQ(v.out, "all clear\n");

  // Move the last copy onto the first one's start: a contention or ordering fault.
  auto text = slurp(timeline);
  std::istringstream in(text);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  auto field = [](const std::string& l, int i) {
    std::stringstream ss(l);
    std::string f;
    for (int k = 0; k <= i; ++k) std::getline(ss, f, ',');
    return f;
  };
  const auto& first = lines[1];
  auto& last = lines[lines.size() - 2];
  std::string rebuilt;
  for (int i = 0; i < 8; ++i) {
    rebuilt += (i == 4 ? field(first, 4) : i == 5 ? field(first, 5) : field(last, i));
    if (i < 7) rebuilt += ",";
  }
  last = rebuilt;
  std::ofstream(timeline) << [&] {
    std::string s2;
    for (auto& l : lines) s2 += l + "\n";
    return s2;
  }();
  auto bad = run({"verify", "--graph", graph, "--timeline", timeline});
  EXPECT_EQ(bad.code, 1) << bad.out;
}

TEST(Cli, DeterministicOutputs) {
  const std::vector<std::vector<std::string>> cmds{
      {"bench", "bw", "--sizes", "2M..32M", "--gpu-paths", "3", "--graph", "on"},
      {"bench", "bibw", "--sizes", "8M", "--host", "on", "--gpu-paths", "2"},
      {"bench", "latency", "--topology", "narval", "--sizes", "4M", "--graph", "on"},
      {"bench", "jacobi", "--nx", "16777216", "--iterations", "10", "--gpu-paths", "2"},
      {"tune", "--sizes", "1M,16M"},
      {"overhead", "--nodes", "1..64"},
      {"simulate", "--size", "3M", "--gpu-paths", "2"},
      {"fuzz", "--seed", "5", "--cases", "20"}};
  for (const auto& c : cmds) {
    auto a = run(c);
    auto b = run(c);
    ASSERT_EQ(a.code, 0) << c[0] << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << c[0];
    EXPECT_FALSE(a.out.empty());
  }
}

TEST(Cli, FuzzSeedChangesOutput) {
  EXPECT_NE(run({"fuzz", "--seed", "1", "--cases", "10"}).out, run({"fuzz", "--seed", "2", "--cases", "10"}).out);
}

TEST(Cli, TuningTableFeedsBench) {
  const auto path = temp_path("tuning.csv");
  ASSERT_EQ(run({"tune", "--sizes", "8M", "--output", path}).code, 0);
  auto r = run({"bench", "bw", "--sizes", "8M", "--gpu-paths", "2", "--tuning-table", path});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(run({"bench", "bw", "--tuning-table", "/nonexistent.csv"}).code, 0);
}

TEST(Cli, JacobiRejectsSmallTopology) {
  const auto path = temp_path("two.topo");
  std::ofstream(path) << "name = two\n[device]\nkind = host\n[device]\nkind = accelerator\nindex = 0\n"
                         "[device]\nkind = accelerator\nindex = 1\n[link]\na = 0\nb = 1\nbandwidth = 1e9\nlatency = 0\n";
  auto r = run({"bench", "jacobi", "--topology", path, "--iterations", "2"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("4"), std::string::npos);
}
