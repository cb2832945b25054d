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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpath/integrity.hpp"
#include "mpath/overhead.hpp"
#include "mpath/path_planner.hpp"
#include "mpath/simkernel.hpp"
#include "mpath/topology.hpp"
#include "mpath/tuner.hpp"

namespace mpath {

enum class BenchKind { put_bw, omb_bw, omb_bibw, omb_latency, jacobi };

std::string to_string(BenchKind kind);

struct BenchmarkSpec {
  BenchKind kind = BenchKind::omb_bw;
  std::vector<Bytes> sizes;
  std::uint32_t window = 1;
  std::uint32_t iterations = 10;  // measured
  std::uint32_t warmup = 1;       // run first, excluded from steady-state numbers
  PathConfig config;
  // Fixed chunk count per path; nullopt picks it per size, from `tuning` when
  // given, otherwise by sweeping chunk counts with paths and host fixed.
  std::optional<std::uint32_t> chunks;
  const TuningTable* tuning = nullptr;
  std::uint32_t reuse_count = 1000;
  DeviceId src = DeviceId::accelerator(0);
  DeviceId dst = DeviceId::accelerator(1);
};

// Throws ConfigError on an empty size list, zero window or zero iterations.
void validate(const BenchmarkSpec& spec);

// The comparator everywhere: one direct path, one chunk, streamed.
PathConfig baseline_config();

// One CSV row: benchmark,topology,size,window,gpu_paths,host,graph_mode,chunks,metric,value,speedup
struct BenchRow {
  std::string benchmark;
  std::string topology;
  Bytes size = 0;
  std::uint32_t window = 1;
  std::uint32_t gpu_paths = 1;
  bool host = false;
  bool graph_mode = false;
  std::uint32_t chunks = 1;
  std::string metric;
  double value = 0;
  double speedup = 1.0;
};

// Lifecycle breakdown of one latency measurement (the forward leg).
struct PhaseBreakdown {
  Bytes size = 0;
  std::size_t nodes = 0;
  PhaseCosts first;
  PhaseCosts steady;
  Seconds first_latency = 0;   // one-way, first iteration
  Seconds steady_latency = 0;  // one-way, later iterations

  double first_fraction(Phase p) const { return first.get(p) / first_latency; }
  double steady_fraction(Phase p) const { return steady.get(p) / steady_latency; }
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<PhaseBreakdown> breakdowns;  // latency runs only
  bool integrity_ok = true;                // every simulated exchange passed
};

// One bandwidth cell: `window` messages posted together per iteration in each
// direction; bandwidth is bytes per iteration over the mean measured iteration.
struct BandwidthCell {
  double bandwidth = 0;        // steady state, bytes/s
  double first_bandwidth = 0;  // first iteration, bytes/s
  std::uint32_t chunks = 1;
  std::size_t nodes = 0;       // per message
  bool integrity_ok = true;
};

BandwidthCell measure_bandwidth(const Topology& topology, Bytes size, const PathConfig& config,
                                std::uint32_t window, std::uint32_t iterations, std::uint32_t warmup,
                                const OverheadModel& model, bool bidirectional, DeviceId src = DeviceId::accelerator(0),
                                DeviceId dst = DeviceId::accelerator(1));

// Chunk count a spec resolves to for one size.
std::uint32_t resolve_chunks(const BenchmarkSpec& spec, const Topology& topology, Bytes size,
                             const OverheadModel& model);

BenchResult run_bw(const BenchmarkSpec& spec, const Topology& topology, const OverheadModel& model);
BenchResult run_bibw(const BenchmarkSpec& spec, const Topology& topology, const OverheadModel& model);
BenchResult run_latency(const BenchmarkSpec& spec, const Topology& topology, const OverheadModel& model);

struct JacobiSpec {
  std::uint32_t ranks = 4;
  std::uint64_t ny = 8;
  std::vector<std::uint64_t> nx{std::uint64_t{1} << 30};  // 256 MiB halos at 1-byte cells
  Bytes element_size = 1;
  std::uint32_t iterations = 1000;
  Seconds compute_time_per_cell = 0;
  std::optional<std::uint32_t> chunks;  // nullopt: sweep for the fastest exchange
};

Bytes halo_bytes(const JacobiSpec& spec, std::uint64_t nx);
Seconds compute_time_per_iteration(const JacobiSpec& spec, std::uint64_t nx);

struct JacobiPoint {
  std::uint64_t nx = 0;
  Bytes halo = 0;
  std::uint32_t chunks = 1;
  Seconds compute = 0;      // per iteration
  Seconds comm_first = 0;   // first exchange
  Seconds comm_steady = 0;  // later exchanges
  Seconds comm_total = 0;
  Seconds runtime = 0;
  bool contended = false;
  bool integrity_ok = true;
};

// Ring halo exchange i -> i+1 on a 4-accelerator topology with staging
// chosen by plan_contention_free.
JacobiPoint simulate_jacobi(const JacobiSpec& spec, std::uint64_t nx, const Topology& topology,
                            const PathConfig& config, const OverheadModel& model);

// Compute cost per cell that makes compute `compute_fraction` of the
// single-path runtime at this nx.
Seconds calibrate_compute_time(const JacobiSpec& spec, std::uint64_t nx, const Topology& topology,
                               double compute_fraction, const OverheadModel& model);

BenchResult run_jacobi(const JacobiSpec& spec, const Topology& topology, const PathConfig& config,
                       const OverheadModel& model);

// Per-phase host overhead for graphs of the given node counts.
// CSV: nodes,iteration,phase,cost,fraction
std::string overhead_csv(const OverheadModel& model, const std::vector<std::uint64_t>& nodes,
                         ExecMode mode);

std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace mpath
