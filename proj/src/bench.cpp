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

#include "mpath/bench.hpp"

#include <algorithm>
#include <memory>

#include <fmt/format.h>

#include "mpath/error.hpp"
#include "mpath/graph_cache.hpp"
#include "mpath/pipeline.hpp"

namespace mpath {

std::string to_string(BenchKind kind) {
  switch (kind) {
    case BenchKind::put_bw: return "put_bw";
    case BenchKind::omb_bw: return "omb_bw";
    case BenchKind::omb_bibw: return "omb_bibw";
    case BenchKind::omb_latency: return "omb_latency";
    case BenchKind::jacobi: return "jacobi";
  }
  return "unknown";
}

void validate(const BenchmarkSpec& spec) {
  if (spec.sizes.empty()) throw ConfigError("benchmark needs at least one message size");
  if (spec.window < 1) throw ConfigError("window must be >= 1");
  if (spec.iterations < 1) throw ConfigError("iterations must be >= 1");
  if (std::any_of(spec.sizes.begin(), spec.sizes.end(), [](Bytes b) { return b == 0; })) {
    throw ConfigError("message sizes must be >= 1 byte");
  }
  validate(spec.config);
}

PathConfig baseline_config() {
  PathConfig c;
  c.num_gpu_paths = 1;
  c.host_path_enabled = false;
  c.max_chunks = 1;
  c.graph_mode = false;
  return c;
}

namespace {

ExecMode mode_of(const PathConfig& c) { return c.graph_mode ? ExecMode::graph : ExecMode::streamed; }

// One direction of traffic issued by one rank: its plan, its graph cache and
// the buffers standing in for device addresses in the cache key.
struct Flow {
  ChunkPlan plan;
  std::shared_ptr<const ExecGraph> graph;
  GraphKey key;
  GraphCache cache;
  std::uint32_t issuer = 0;

  Flow(const Topology& t, DeviceId src, DeviceId dst, Bytes size, const PathConfig& c, std::uint32_t rank)
      : cache(c.cache_capacity), issuer(rank) {
    auto ps = plan_paths(t, src, dst, c);
    plan = make_chunk_plan(ps, size, c.max_chunks);
    graph = std::make_shared<const ExecGraph>(build_graph(plan));
    key = graph_key(2 * rank + 1, 2 * rank + 2, size, c, ps);
  }

  Flow(const ChunkPlan& p, const PathConfig& c, std::uint32_t rank)
      : plan(p), cache(c.cache_capacity), issuer(rank) {
    graph = std::make_shared<const ExecGraph>(build_graph(plan));
    key = graph_key(2 * rank + 1, 2 * rank + 2, plan.total_size, c, plan.path_set);
  }

  TransferJob job(ExecMode mode, Seconds arrival) {
    TransferJob j;
    j.mode = mode;
    j.arrival = arrival;
    j.issuer = issuer;
    if (mode == ExecMode::graph) {
      auto hit = cache_get_or_build(cache, key, plan);
      j.graph = hit.graph;
      j.first_time = !hit.hit;
    } else {
      j.graph = graph;
    }
    return j;
  }
};

std::vector<bool> signature(const std::vector<TransferJob>& jobs) {
  std::vector<bool> s;
  for (const auto& j : jobs) s.push_back(j.first_time);
  return s;
}

struct IterationResult {
  Seconds makespan = 0;
  bool integrity_ok = true;
};

IterationResult run_iteration(const Topology& t, const std::vector<TransferJob>& jobs,
                              const OverheadModel& model) {
  auto timelines = simulate_concurrent(t, jobs, model);
  IterationResult r;
  for (const auto& tl : timelines) r.makespan = std::max(r.makespan, tl.finish);
  std::vector<const ExecGraph*> graphs;
  for (const auto& j : jobs) graphs.push_back(j.graph.get());
  r.integrity_ok = check_concurrent(graphs, timelines).all_clear();
  return r;
}

BenchRow row_for(const std::string& bench, const Topology& t, Bytes size, std::uint32_t window,
                 const PathConfig& c, std::string metric, double value, double speedup) {
  BenchRow r;
  r.benchmark = bench;
  r.topology = t.name();
  r.size = size;
  r.window = window;
  r.gpu_paths = c.num_gpu_paths;
  r.host = c.host_path_enabled;
  r.graph_mode = c.graph_mode;
  r.chunks = c.max_chunks;
  r.metric = std::move(metric);
  r.value = value;
  r.speedup = speedup;
  return r;
}

TuneOptions tune_options(const BenchmarkSpec& spec) {
  TuneOptions o;
  o.src = spec.src;
  o.dst = spec.dst;
  o.share_policy = spec.config.share_policy;
  o.reuse_count = spec.reuse_count;
  return o;
}

}  // namespace

BandwidthCell measure_bandwidth(const Topology& topology, Bytes size, const PathConfig& config,
                                std::uint32_t window, std::uint32_t iterations, std::uint32_t warmup,
                                const OverheadModel& model, bool bidirectional, DeviceId src, DeviceId dst) {
  if (window < 1 || iterations < 1) throw ConfigError("window and iterations must be >= 1");
  std::vector<Flow> flows;
  flows.emplace_back(topology, src, dst, size, config, 0);
  if (bidirectional) flows.emplace_back(topology, dst, src, size, config, 1);
  const auto mode = mode_of(config);

  BandwidthCell cell;
  cell.chunks = config.max_chunks;
  cell.nodes = flows.front().graph->nodes.size();
  Seconds first = 0;
  Seconds measured = 0;
  std::vector<bool> prev_sig;
  IterationResult prev;
  for (std::uint32_t it = 0; it < warmup + iterations; ++it) {
    std::vector<TransferJob> jobs;
    for (std::uint32_t w = 0; w < window; ++w) {
      for (auto& f : flows) jobs.push_back(f.job(mode, 0));
    }
    // Iterations start from idle channels, so equal cache outcomes give equal
    // timelines.
    auto sig = signature(jobs);
    IterationResult r = (it > 0 && sig == prev_sig) ? prev : run_iteration(topology, jobs, model);
    cell.integrity_ok = cell.integrity_ok && r.integrity_ok;
    if (it == 0) first = r.makespan;
    if (it >= warmup) measured += r.makespan;
    prev_sig = std::move(sig);
    prev = r;
  }
  const double bytes = static_cast<double>(size) * window * flows.size();
  cell.first_bandwidth = bytes / first;
  cell.bandwidth = bytes / (measured / iterations);
  return cell;
}

std::uint32_t resolve_chunks(const BenchmarkSpec& spec, const Topology& topology, Bytes size,
                             const OverheadModel& model) {
  if (spec.chunks) return *spec.chunks;
  const auto mode = mode_of(spec.config);
  if (spec.tuning) {
    if (const auto* e = spec.tuning->find(size, mode)) return e->best.max_chunks;
  }
  return best_chunks(topology, size, mode, spec.config.num_gpu_paths, spec.config.host_path_enabled,
                     model, tune_options(spec));
}

namespace {

BenchResult run_bandwidth(const BenchmarkSpec& spec, const Topology& topology, const OverheadModel& model,
                          bool bidirectional) {
  validate(spec);
  BenchResult out;
  const auto name = to_string(spec.kind);
  for (auto size : spec.sizes) {
    auto config = spec.config;
    config.max_chunks = resolve_chunks(spec, topology, size, model);
    auto cell = measure_bandwidth(topology, size, config, spec.window, spec.iterations, spec.warmup, model,
                                  bidirectional, spec.src, spec.dst);
    auto base = measure_bandwidth(topology, size, baseline_config(), spec.window, spec.iterations,
                                  spec.warmup, model, bidirectional, spec.src, spec.dst);
    out.integrity_ok = out.integrity_ok && cell.integrity_ok && base.integrity_ok;
    out.rows.push_back(row_for(name, topology, size, spec.window, config, "bandwidth_MBps",
                               cell.bandwidth / 1e6, cell.bandwidth / base.bandwidth));
    out.rows.push_back(row_for(name, topology, size, spec.window, config, "first_bandwidth_MBps",
                               cell.first_bandwidth / 1e6, cell.first_bandwidth / base.first_bandwidth));
  }
  return out;
}

struct LatencyCell {
  Seconds first = 0;   // one-way
  Seconds steady = 0;  // one-way, mean of measured iterations
  PhaseBreakdown breakdown;
  bool integrity_ok = true;
};

// Ping-pong: rank 0 sends, rank 1 answers once the message has landed.
LatencyCell measure_latency(const Topology& t, Bytes size, const PathConfig& c, std::uint32_t iterations,
                            std::uint32_t warmup, const OverheadModel& model, DeviceId src, DeviceId dst) {
  Flow ping(t, src, dst, size, c, 0);
  Flow pong(t, dst, src, size, c, 1);
  const auto mode = mode_of(c);
  LatencyCell cell;
  cell.breakdown.size = size;
  cell.breakdown.nodes = ping.graph->nodes.size();
  Seconds measured = 0;
  for (std::uint32_t it = 0; it < warmup + iterations; ++it) {
    auto a = ping.job(mode, 0);
    auto fwd = simulate_concurrent(t, {a}, model).front();
    auto b = pong.job(mode, fwd.finish);
    auto back = simulate_concurrent(t, {b}, model).front();
    cell.integrity_ok = cell.integrity_ok && check_timeline(*a.graph, fwd).all_clear() &&
                        check_timeline(*b.graph, back).all_clear();
    const Seconds one_way = back.finish / 2;
    if (it == 0) {
      cell.first = one_way;
      cell.breakdown.first = fwd.overhead;
      cell.breakdown.first_latency = fwd.makespan;
    }
    if (it >= warmup) measured += one_way;
    cell.breakdown.steady = fwd.overhead;
    cell.breakdown.steady_latency = fwd.makespan;
  }
  cell.steady = measured / iterations;
  return cell;
}

}  // namespace

BenchResult run_bw(const BenchmarkSpec& spec, const Topology& topology, const OverheadModel& model) {
  return run_bandwidth(spec, topology, model, false);
}

BenchResult run_bibw(const BenchmarkSpec& spec, const Topology& topology, const OverheadModel& model) {
  return run_bandwidth(spec, topology, model, true);
}

BenchResult run_latency(const BenchmarkSpec& spec, const Topology& topology, const OverheadModel& model) {
  validate(spec);
  BenchResult out;
  const auto name = to_string(spec.kind);
  for (auto size : spec.sizes) {
    auto config = spec.config;
    config.max_chunks = resolve_chunks(spec, topology, size, model);
    auto cell = measure_latency(topology, size, config, spec.iterations, spec.warmup, model, spec.src, spec.dst);
    auto base = measure_latency(topology, size, baseline_config(), spec.iterations, spec.warmup, model,
                                spec.src, spec.dst);
    out.integrity_ok = out.integrity_ok && cell.integrity_ok && base.integrity_ok;
    auto add = [&](std::string metric, double value, double speedup) {
      out.rows.push_back(row_for(name, topology, size, 1, config, std::move(metric), value, speedup));
    };
    add("latency_us", cell.steady * 1e6, base.steady / cell.steady);
    add("latency_first_us", cell.first * 1e6, base.first / cell.first);
    add("nodes", static_cast<double>(cell.breakdown.nodes), 1.0);
    const auto& b = cell.breakdown;
    if (config.graph_mode) {
      for (auto p : kAllPhases) {
        add(fmt::format("{}_first_us", to_string(p)), b.first.get(p) * 1e6, 1.0);
        add(fmt::format("{}_first_fraction", to_string(p)), b.first_fraction(p), 1.0);
      }
      for (auto p : kAllPhases) {
        add(fmt::format("{}_steady_us", to_string(p)), b.steady.get(p) * 1e6, 1.0);
        add(fmt::format("{}_steady_fraction", to_string(p)), b.steady_fraction(p), 1.0);
      }
    } else {
      add("submit_us", b.steady.submit * 1e6, 1.0);
      add("event_us", b.steady.event * 1e6, 1.0);
    }
    out.breakdowns.push_back(b);
  }
  return out;
}

Bytes halo_bytes(const JacobiSpec& spec, std::uint64_t nx) { return nx * spec.element_size / spec.ranks; }

Seconds compute_time_per_iteration(const JacobiSpec& spec, std::uint64_t nx) {
  return static_cast<double>(nx) * static_cast<double>(spec.ny) * spec.compute_time_per_cell / spec.ranks;
}

JacobiPoint simulate_jacobi(const JacobiSpec& spec, std::uint64_t nx, const Topology& topology,
                            const PathConfig& config, const OverheadModel& model) {
  if (spec.ranks != 4 || topology.accelerator_count() != 4) {
    throw ConfigError(fmt::format("jacobi models a 4-rank ring; topology '{}' has {} accelerators and "
                                  "{} ranks were requested",
                                  topology.name(), topology.accelerator_count(), spec.ranks));
  }
  if (spec.iterations < 1) throw ConfigError("jacobi needs at least one iteration");
  JacobiPoint p;
  p.nx = nx;
  p.halo = halo_bytes(spec, nx);
  if (p.halo == 0) throw ConfigError(fmt::format("nx={} gives an empty halo", nx));
  p.chunks = config.max_chunks;
  p.compute = compute_time_per_iteration(spec, nx);

  std::vector<std::pair<DeviceId, DeviceId>> ring;
  for (std::uint32_t r = 0; r < spec.ranks; ++r) {
    ring.emplace_back(DeviceId::accelerator(r), DeviceId::accelerator((r + 1) % spec.ranks));
  }
  auto plan = plan_contention_free(topology, ring, config);
  p.contended = plan.contended;
  std::vector<Flow> flows;
  for (std::uint32_t r = 0; r < spec.ranks; ++r) {
    flows.emplace_back(make_chunk_plan(plan.path_sets[r], p.halo, config.max_chunks), config, r);
  }

  const auto mode = mode_of(config);
  std::vector<bool> prev_sig;
  IterationResult prev;
  for (std::uint32_t it = 0; it < spec.iterations; ++it) {
    std::vector<TransferJob> jobs;
    for (auto& f : flows) jobs.push_back(f.job(mode, 0));
    auto sig = signature(jobs);
    IterationResult r = (it > 0 && sig == prev_sig) ? prev : run_iteration(topology, jobs, model);
    p.integrity_ok = p.integrity_ok && r.integrity_ok;
    if (it == 0) p.comm_first = r.makespan;
    p.comm_steady = r.makespan;
    p.comm_total += r.makespan;
    prev_sig = std::move(sig);
    prev = r;
  }
  p.runtime = p.compute * spec.iterations + p.comm_total;
  return p;
}

Seconds calibrate_compute_time(const JacobiSpec& spec, std::uint64_t nx, const Topology& topology,
                               double compute_fraction, const OverheadModel& model) {
  if (!(compute_fraction >= 0 && compute_fraction < 1)) {
    throw ConfigError("compute fraction must be in [0, 1)");
  }
  auto probe = spec;
  probe.compute_time_per_cell = 0;
  auto single = simulate_jacobi(probe, nx, topology, baseline_config(), model);
  const Seconds compute_total = single.comm_total * compute_fraction / (1 - compute_fraction);
  const double cells_per_rank = static_cast<double>(nx) * static_cast<double>(spec.ny) / spec.ranks;
  return compute_total / (spec.iterations * cells_per_rank);
}

BenchResult run_jacobi(const JacobiSpec& spec, const Topology& topology, const PathConfig& config,
                       const OverheadModel& model) {
  if (spec.nx.empty()) throw ConfigError("jacobi needs at least one problem size");
  validate(config);
  BenchResult out;
  for (auto nx : spec.nx) {
    auto c = config;
    JacobiPoint best;
    if (spec.chunks) {
      c.max_chunks = *spec.chunks;
      best = simulate_jacobi(spec, nx, topology, c, model);
    } else {
      bool have = false;
      for (std::uint32_t chunks : {1u, 2u, 4u, 8u, 16u, 32u}) {
        c.max_chunks = chunks;
        auto p = simulate_jacobi(spec, nx, topology, c, model);
        if (!have || p.comm_total < best.comm_total) best = p;
        have = true;
      }
      c.max_chunks = best.chunks;
    }
    auto base = simulate_jacobi(spec, nx, topology, baseline_config(), model);
    out.integrity_ok = out.integrity_ok && best.integrity_ok && base.integrity_ok;
    auto add = [&](std::string metric, double value, double speedup) {
      out.rows.push_back(row_for("jacobi", topology, best.halo, 1, c, std::move(metric), value, speedup));
    };
    add("runtime_s", best.runtime, base.runtime / best.runtime);
    add("comm_s", best.comm_total, base.comm_total / best.comm_total);
    add("comm_fraction", best.comm_total / best.runtime, 1.0);
  }
  return out;
}

std::string overhead_csv(const OverheadModel& model, const std::vector<std::uint64_t>& nodes, ExecMode mode) {
  std::string out = "nodes,iteration,phase,cost,fraction\n";
  for (auto n : nodes) {
    if (n < 1) throw ConfigError("node counts must be >= 1");
    for (bool first : {true, false}) {
      const char* iteration = first ? "first" : "steady";
      if (mode == ExecMode::graph) {
        Seconds total = 0;
        for (auto p : kAllPhases) total += lifecycle_cost(model, n, first, p);
        for (auto p : kAllPhases) {
          Seconds cost = lifecycle_cost(model, n, first, p);
          out += fmt::format("{},{},{},{},{}\n", n, iteration, to_string(p), cost,
                             total > 0 ? cost / total : 0.0);
        }
      } else {
        Seconds cost = model.submit_cost * static_cast<double>(n);
        out += fmt::format("{},{},submit,{},{}\n", n, iteration, cost, cost > 0 ? 1.0 : 0.0);
      }
    }
  }
  return out;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "benchmark,topology,size,window,gpu_paths,host,graph_mode,chunks,metric,value,speedup\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", r.benchmark, r.topology, r.size, r.window,
                       r.gpu_paths, r.host ? "on" : "off", r.graph_mode ? "on" : "off", r.chunks, r.metric,
                       r.value, r.speedup);
  }
  return out;
}

}  // namespace mpath
