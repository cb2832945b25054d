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

#include "mpath/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mpath/bench.hpp"
#include "mpath/error.hpp"
#include "mpath/exec_graph.hpp"
#include "mpath/graph_cache.hpp"
#include "mpath/integrity.hpp"
#include "mpath/overhead.hpp"
#include "mpath/pipeline.hpp"
#include "mpath/simkernel.hpp"
#include "mpath/topology.hpp"
#include "mpath/tuner.hpp"
#include "mpath/units.hpp"

namespace mpath {

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  };
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read '{}'", path));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ExecMode parse_mode(std::string_view text) {
  if (text == "graph") return ExecMode::graph;
  if (text == "streamed") return ExecMode::streamed;
  throw ConfigError(fmt::format("unknown mode '{}' (expected graph or streamed)", text));
}

// Flag values as typed; empty means "not given" so env defaults survive.
struct ConfigFlags {
  std::string gpu_paths;
  std::string host;
  std::string chunks;
  std::string graph;
  std::string cache_size;
  std::string share_policy;

  void add(CLI::App& app) {
    app.add_option("--gpu-paths", gpu_paths, "GPU paths incl. direct (MP_NUM_GPU_PATHS)");
    app.add_option("--host", host, "host-staged path on|off (MP_ENABLE_HOST_PATH)");
    app.add_option("--chunks", chunks, "chunks per path, N or 'tuned' (MP_MAX_CHUNKS)");
    app.add_option("--graph", graph, "graph mode on|off (MP_ENABLE_GRAPH)");
    app.add_option("--cache-size", cache_size, "graph cache capacity (MP_GRAPH_CACHE_SIZE)");
    app.add_option("--share-policy", share_policy, "equal|bandwidth (MP_SHARE_POLICY)");
  }
};

std::uint32_t parse_positive(std::string_view flag, const std::string& v) {
  std::uint64_t n = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (ec != std::errc{} || p != v.data() + v.size() || n == 0 || n > 0xffffffffu) {
    throw ConfigError(fmt::format("{} expects a positive integer, got '{}'", flag, v));
  }
  return static_cast<std::uint32_t>(n);
}

struct ResolvedConfig {
  PathConfig config;
  bool chunks_tuned = false;  // no explicit chunk count from flag or env
};

ResolvedConfig resolve_config(const ConfigFlags& f, const EnvLookup& env) {
  ResolvedConfig r;
  r.config = config_from_env(env);
  r.chunks_tuned = !env("MP_MAX_CHUNKS").has_value();
  if (!f.gpu_paths.empty()) r.config.num_gpu_paths = parse_positive("--gpu-paths", f.gpu_paths);
  if (!f.host.empty()) r.config.host_path_enabled = parse_flag(f.host);
  if (!f.graph.empty()) r.config.graph_mode = parse_flag(f.graph);
  if (!f.cache_size.empty()) r.config.cache_capacity = parse_positive("--cache-size", f.cache_size);
  if (!f.share_policy.empty()) r.config.share_policy = parse_share_policy(f.share_policy);
  if (f.chunks == "tuned") {
    r.chunks_tuned = true;
  } else if (!f.chunks.empty()) {
    r.config.max_chunks = parse_positive("--chunks", f.chunks);
    r.chunks_tuned = false;
  }
  validate(r.config);
  return r;
}

OverheadModel resolve_model(const std::string& path) {
  return path.empty() ? OverheadModel{} : load_overhead_model_file(path);
}

void emit(const std::string& text, const std::string& output, std::ostream& out) {
  if (output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(output, std::ios::binary);
  if (!f) throw ConfigError(fmt::format("cannot write '{}'", output));
  f << text;
  if (!f) throw ConfigError(fmt::format("write to '{}' failed", output));
}

std::string fuzz_csv(std::uint64_t seed, std::uint32_t cases, bool& all_ok) {
  std::mt19937_64 rng(seed);
  const auto topo = resolve_topology("beluga");
  const auto model = OverheadModel{};
  std::string out = "case,size,gpu_paths,host,chunks,graph_mode,nodes,makespan,ok\n";
  all_ok = true;
  for (std::uint32_t i = 0; i < cases; ++i) {
    PathConfig c;
    c.num_gpu_paths = std::uniform_int_distribution<std::uint32_t>(1, 3)(rng);
    c.host_path_enabled = std::bernoulli_distribution(0.5)(rng);
    c.max_chunks = std::uniform_int_distribution<std::uint32_t>(1, 32)(rng);
    c.graph_mode = std::bernoulli_distribution(0.5)(rng);
    const Bytes size = std::uniform_int_distribution<Bytes>(1, 64 * MiB)(rng);
    const auto src = std::uniform_int_distribution<std::uint32_t>(0, 3)(rng);
    const auto dst = (src + std::uniform_int_distribution<std::uint32_t>(1, 3)(rng)) % 4;
    auto ps = plan_paths(topo, DeviceId::accelerator(src), DeviceId::accelerator(dst), c);
    auto plan = make_chunk_plan(ps, size, c.max_chunks);
    auto graph = build_graph(plan);
    Timeline tl = c.graph_mode ? simulate_graph(topo, graph, model, true) : simulate_streamed(topo, plan, model);
    const bool ok = check_coverage(plan).all_clear() && check_timeline(graph, tl).all_clear();
    all_ok = all_ok && ok;
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", i, size, c.num_gpu_paths, c.host_path_enabled ? "on" : "off",
                       c.max_chunks, c.graph_mode ? "on" : "off", graph.nodes.size(), tl.makespan, ok ? 1 : 0);
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, const EnvLookup& env, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-path intra-node transfer simulator", "mpath"};
  app.require_subcommand(1);

  std::string topology = "beluga";
  std::string output;
  std::string overhead_path;
  ConfigFlags flags;

  // topo validate
  auto* topo_cmd = app.add_subcommand("topo", "topology files");
  topo_cmd->require_subcommand(1);
  auto* validate_cmd = topo_cmd->add_subcommand("validate", "parse and validate a topology");
  std::string topo_arg;
  validate_cmd->add_option("topology", topo_arg, "preset name or file")->required();

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "simulate one transfer and emit its timeline");
  std::string sim_size = "64M";
  std::uint32_t sim_src = 0, sim_dst = 1;
  std::string dump_path;
  bool steady = false;
  sim_cmd->add_option("--size", sim_size, "message size");
  sim_cmd->add_option("--src", sim_src, "source accelerator");
  sim_cmd->add_option("--dst", sim_dst, "destination accelerator");
  sim_cmd->add_option("--dump-graph", dump_path, "write the graph dump here");
  sim_cmd->add_flag("--steady", steady, "graph mode: cached graph, launch cost only");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "benchmarks");
  bench_cmd->require_subcommand(1);
  std::string sizes = "2M..512M";
  std::uint32_t window = 1, iterations = 10, warmup = 1, reuse = 1000;
  std::string tuning_path;
  auto add_common_bench = [&](CLI::App* c) {
    c->add_option("--sizes", sizes, "sizes, a..b doubling or comma list");
    c->add_option("--window", window, "messages per iteration");
    c->add_option("--iterations", iterations, "measured iterations");
    c->add_option("--warmup", warmup, "excluded leading iterations");
    c->add_option("--tuning-table", tuning_path, "tuning table CSV");
    c->add_option("--reuse", reuse, "graph reuse horizon for tuning");
  };
  auto* bw_cmd = bench_cmd->add_subcommand("bw", "unidirectional bandwidth");
  auto* bibw_cmd = bench_cmd->add_subcommand("bibw", "bidirectional bandwidth");
  auto* lat_cmd = bench_cmd->add_subcommand("latency", "ping-pong latency with phase breakdown");
  std::string put = "off";
  bw_cmd->add_option("--put", put, "label rows put_bw instead of omb_bw (on|off)");
  for (auto* c : {bw_cmd, bibw_cmd, lat_cmd}) add_common_bench(c);
  auto* jac_cmd = bench_cmd->add_subcommand("jacobi", "ring halo exchange model");
  std::string nx = "1073741824";
  std::uint32_t jac_iters = 1000;
  Bytes element = 1;
  double compute_fraction = -1;
  double compute_per_cell = 0;
  jac_cmd->add_option("--nx", nx, "columns, a..b doubling or comma list");
  jac_cmd->add_option("--iterations", jac_iters, "solver iterations");
  jac_cmd->add_option("--element-size", element, "bytes per cell");
  jac_cmd->add_option("--compute-fraction", compute_fraction,
                      "calibrate compute to this fraction of single-path runtime");
  jac_cmd->add_option("--compute-per-cell", compute_per_cell, "seconds per cell per iteration");

  // tune
  auto* tune_cmd = app.add_subcommand("tune", "exhaustive path/chunk search");
  std::string tune_sizes = "2M..512M";
  std::uint32_t tune_reuse = 1000;
  tune_cmd->add_option("--sizes", tune_sizes, "sizes, a..b doubling or comma list");
  tune_cmd->add_option("--reuse", tune_reuse, "graph reuse horizon");

  // overhead
  auto* ovh_cmd = app.add_subcommand("overhead", "per-phase host overhead");
  std::string nodes = "2..34";
  std::string mode = "graph";
  ovh_cmd->add_option("--nodes", nodes, "node counts, a..b doubling or comma list");
  ovh_cmd->add_option("--mode", mode, "graph|streamed");

  // verify
  auto* ver_cmd = app.add_subcommand("verify", "check a timeline against a graph dump");
  std::string ver_graph, ver_timeline;
  ver_cmd->add_option("--graph", ver_graph, "graph dump")->required();
  ver_cmd->add_option("--timeline", ver_timeline, "timeline CSV")->required();

  // fuzz
  auto* fuzz_cmd = app.add_subcommand("fuzz", "randomized plan/simulate/verify cases");
  std::uint64_t seed = 1;
  std::uint32_t cases = 100;
  fuzz_cmd->add_option("--seed", seed, "RNG seed");
  fuzz_cmd->add_option("--cases", cases, "case count");

  for (auto* c : {sim_cmd, bw_cmd, bibw_cmd, lat_cmd, jac_cmd, tune_cmd}) {
    c->add_option("--topology", topology, "preset name or file");
    flags.add(*c);
  }
  for (auto* c : {sim_cmd, bw_cmd, bibw_cmd, lat_cmd, jac_cmd, tune_cmd, ovh_cmd}) {
    c->add_option("--overhead-model", overhead_path, "overhead coefficients file");
  }
  for (auto* c : {sim_cmd, bw_cmd, bibw_cmd, lat_cmd, jac_cmd, tune_cmd, ovh_cmd, fuzz_cmd}) {
    c->add_option("--output,-o", output, "write CSV here instead of stdout");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  }

  try {
    if (*validate_cmd) {
      auto t = resolve_topology(topo_arg);
      out << describe(t) << "\n";
      return 0;
    }
    if (*ovh_cmd) {
      emit(overhead_csv(resolve_model(overhead_path), parse_count_list(nodes), parse_mode(mode)), output, out);
      return 0;
    }
    if (*ver_cmd) {
      auto graph = parse_graph_dump(read_file(ver_graph));
      auto parsed = parse_timeline_csv(read_file(ver_timeline));
      auto report = check_timeline(graph, parsed.timeline);
      out << summarize(report) << "\n";
      return report.all_clear() ? 0 : 1;
    }
    if (*fuzz_cmd) {
      bool ok = true;
      emit(fuzz_csv(seed, cases, ok), output, out);
      if (!ok) err << "error: fuzz found integrity violations\n";
      return ok ? 0 : 1;
    }

    const auto topo = resolve_topology(topology);
    const auto model = resolve_model(overhead_path);
    const auto rc = resolve_config(flags, env);

    if (*sim_cmd) {
      auto ps = plan_paths(topo, DeviceId::accelerator(sim_src), DeviceId::accelerator(sim_dst), rc.config);
      auto plan = make_chunk_plan(ps, parse_size(sim_size), rc.config.max_chunks);
      auto graph = build_graph(plan);
      auto tl = rc.config.graph_mode ? simulate_graph(topo, graph, model, !steady)
                                     : simulate_streamed(topo, plan, model);
      if (!dump_path.empty()) emit(dump_graph(graph), dump_path, out);
      emit(timeline_csv(topo, tl), output, out);
      return 0;
    }
    if (*tune_cmd) {
      TuneOptions o;
      o.share_policy = rc.config.share_policy;
      o.reuse_count = tune_reuse;
      auto table = tune(topo, parse_size_list(tune_sizes), TuningGrid{}, model, o);
      emit(tuning_table_csv(table), output, out);
      return 0;
    }
    if (*jac_cmd) {
      JacobiSpec spec;
      spec.nx = parse_count_list(nx);
      spec.iterations = jac_iters;
      spec.element_size = element;
      spec.compute_time_per_cell = compute_per_cell;
      if (!rc.chunks_tuned) spec.chunks = rc.config.max_chunks;
      if (compute_fraction >= 0) {
        spec.compute_time_per_cell =
            calibrate_compute_time(spec, spec.nx.front(), topo, compute_fraction, model);
      }
      auto result = run_jacobi(spec, topo, rc.config, model);
      emit(bench_csv(result.rows), output, out);
      if (!result.integrity_ok) {
        err << "error: integrity violation in a simulated exchange\n";
        return 1;
      }
      return 0;
    }

    BenchmarkSpec spec;
    spec.sizes = parse_size_list(sizes);
    spec.window = window;
    spec.iterations = iterations;
    spec.warmup = warmup;
    spec.config = rc.config;
    spec.reuse_count = reuse;
    if (!rc.chunks_tuned) spec.chunks = rc.config.max_chunks;
    TuningTable table;
    if (!tuning_path.empty()) {
      table = load_tuning_table_file(tuning_path);
      spec.tuning = &table;
    }
    BenchResult result;
    if (*bw_cmd) {
      spec.kind = parse_flag(put) ? BenchKind::put_bw : BenchKind::omb_bw;
      result = run_bw(spec, topo, model);
    } else if (*bibw_cmd) {
      spec.kind = BenchKind::omb_bibw;
      result = run_bibw(spec, topo, model);
    } else {
      spec.kind = BenchKind::omb_latency;
      result = run_latency(spec, topo, model);
    }
    emit(bench_csv(result.rows), output, out);
    if (!result.integrity_ok) {
      err << "error: integrity violation in a simulated transfer\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace mpath
