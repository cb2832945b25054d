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

#include "fixtures.hpp"
#include "mpath/bench.hpp"
#include "mpath/error.hpp"

using namespace mpath;

namespace {

BenchmarkSpec spec_for(BenchKind kind, PathConfig c, std::vector<Bytes> sizes, std::uint32_t window = 1) {
  BenchmarkSpec s;
  s.kind = kind;
  s.config = c;
  s.sizes = std::move(sizes);
  s.window = window;
  s.iterations = 5;
  s.chunks = c.max_chunks;
  return s;
}

double value_of(const BenchResult& r, const std::string& metric, Bytes size) {
  for (const auto& row : r.rows) {
    if (row.metric == metric && row.size == size) return row.value;
  }
  ADD_FAILURE() << "no row " << metric << " " << size;
  return 0;
}

double speedup_of(const BenchResult& r, const std::string& metric, Bytes size) {
  for (const auto& row : r.rows) {
    if (row.metric == metric && row.size == size) return row.speedup;
  }
  ADD_FAILURE() << "no row " << metric << " " << size;
  return 0;
}

}  // namespace

TEST(Bench, BaselineAgainstItselfIsExactlyOne) {
  auto t = resolve_topology("beluga");
  auto r = run_bw(spec_for(BenchKind::omb_bw, baseline_config(), {MiB, 64 * MiB}), t, OverheadModel{});
  for (const auto& row : r.rows) EXPECT_EQ(row.speedup, 1.0);
  auto l = run_latency(spec_for(BenchKind::omb_latency, baseline_config(), {MiB}), t, OverheadModel{});
  EXPECT_EQ(speedup_of(l, "latency_us", MiB), 1.0);
}

TEST(Bench, SinglePathZeroOverheadHitsLinkBandwidth) {
  auto t = fixture::mesh(2, 3e9);
  auto cell = measure_bandwidth(t, 96 * MiB, baseline_config(), 1, 3, 1, OverheadModel::zero(), false);
  EXPECT_NEAR(cell.bandwidth / 3e9, 1.0, 1e-12);
}

TEST(Bench, BidirectionalDoublesOnFullDuplexDirect) {
  auto t = fixture::mesh(2, 3e9);
  auto uni = measure_bandwidth(t, 64 * MiB, baseline_config(), 1, 3, 1, OverheadModel{}, false);
  auto bi = measure_bandwidth(t, 64 * MiB, baseline_config(), 1, 3, 1, OverheadModel{}, true);
  EXPECT_NEAR(bi.bandwidth / uni.bandwidth, 2.0, 1e-9);
}

TEST(Bench, WindowNeverReducesBandwidth) {
  auto t = resolve_topology("beluga");
  PathConfig c;
  c.num_gpu_paths = 3;
  c.host_path_enabled = true;
  c.graph_mode = true;
  c.max_chunks = 8;
  for (Bytes size : {2 * MiB, 16 * MiB}) {
    double prev = 0;
    for (std::uint32_t w : {1u, 2u, 4u, 8u, 16u}) {
      auto cell = measure_bandwidth(t, size, c, w, 3, 1, OverheadModel{}, false);
      EXPECT_GE(cell.bandwidth, prev) << size << " w=" << w;
      prev = cell.bandwidth;
      EXPECT_TRUE(cell.integrity_ok);
    }
  }
}

TEST(Bench, FirstIterationPaysGraphSetup) {
  auto t = resolve_topology("beluga");
  PathConfig c;
  c.num_gpu_paths = 2;
  c.graph_mode = true;
  c.max_chunks = 8;
  auto cell = measure_bandwidth(t, 8 * MiB, c, 1, 3, 1, OverheadModel{}, false);
  EXPECT_LT(cell.first_bandwidth, cell.bandwidth);
}

TEST(Bench, SteadyGraphLatencyNotAboveStreamedWhenLaunchIsCheaper) {
  auto t = resolve_topology("narval");
  OverheadModel m;
  for (std::uint32_t k : {2u, 4u, 8u, 16u}) {
    PathConfig g;
    g.num_gpu_paths = 2;
    g.max_chunks = k;
    g.graph_mode = true;
    PathConfig s = g;
    s.graph_mode = false;
    auto lg = run_latency(spec_for(BenchKind::omb_latency, g, {32 * MiB}), t, m);
    auto ls = run_latency(spec_for(BenchKind::omb_latency, s, {32 * MiB}), t, m);
    const auto nodes = static_cast<std::uint64_t>(value_of(lg, "nodes", 32 * MiB));
    if (m.launch.at(nodes) <= m.submit_cost * static_cast<double>(nodes)) {
      EXPECT_LE(value_of(lg, "latency_us", 32 * MiB), value_of(ls, "latency_us", 32 * MiB)) << k;
    }
  }
}

TEST(Bench, LatencyBreakdownRows) {
  auto t = resolve_topology("narval");
  PathConfig c;
  c.num_gpu_paths = 2;
  c.graph_mode = true;
  c.max_chunks = 16;
  auto r = run_latency(spec_for(BenchKind::omb_latency, c, {512 * MiB}), t, OverheadModel{});
  ASSERT_EQ(r.breakdowns.size(), 1u);
  const auto& b = r.breakdowns[0];
  EXPECT_EQ(b.nodes, 48u);
  EXPECT_GT(b.first.instantiation, 0.0);
  EXPECT_EQ(b.steady.instantiation, 0.0);
  EXPECT_GT(value_of(r, "latency_first_us", 512 * MiB), value_of(r, "latency_us", 512 * MiB));
  EXPECT_TRUE(r.integrity_ok);
}

TEST(Bench, TunedChunksComeFromTable) {
  auto t = resolve_topology("beluga");
  PathConfig c;
  c.num_gpu_paths = 2;
  TuningTable table;
  table.entries = {{8 * MiB, ExecMode::streamed, {2, false, 4}, 1}};
  BenchmarkSpec s = spec_for(BenchKind::omb_bw, c, {8 * MiB});
  s.chunks.reset();
  s.tuning = &table;
  EXPECT_EQ(resolve_chunks(s, t, 8 * MiB, OverheadModel{}), 4u);
}

TEST(Bench, SpecValidation) {
  BenchmarkSpec s;
  EXPECT_THROW(validate(s), ConfigError);
  s.sizes = {MiB};
  s.iterations = 0;
  EXPECT_THROW(validate(s), ConfigError);
}

TEST(Bench, JacobiHaloAndTopologyChecks) {
  JacobiSpec j;
  EXPECT_EQ(halo_bytes(j, std::uint64_t{1} << 30), 256 * MiB);
  j.element_size = 4;
  EXPECT_EQ(halo_bytes(j, 1024), 1024u);
  PathConfig c;
  EXPECT_THROW(simulate_jacobi(j, 1024, fixture::mesh(3), c, OverheadModel{}), ConfigError);
}

TEST(Bench, JacobiCalibrationHitsFraction) {
  auto t = resolve_topology("beluga");
  JacobiSpec j;
  j.iterations = 20;
  const std::uint64_t nx = std::uint64_t{1} << 26;
  j.compute_time_per_cell = calibrate_compute_time(j, nx, t, 0.55, OverheadModel{});
  auto p = simulate_jacobi(j, nx, t, baseline_config(), OverheadModel{});
  EXPECT_NEAR(p.compute * j.iterations / p.runtime, 0.55, 1e-9);
  EXPECT_TRUE(p.integrity_ok);
}

TEST(Bench, CsvShape) {
  BenchRow r{"omb_bw", "beluga", 1024, 4, 2, true, false, 8, "bandwidth_MBps", 1.5, 2.25};
  EXPECT_EQ(bench_csv({r}),
            "benchmark,topology,size,window,gpu_paths,host,graph_mode,chunks,metric,value,speedup\n"
            "omb_bw,beluga,1024,4,2,on,off,8,bandwidth_MBps,1.5,2.25\n");
}
