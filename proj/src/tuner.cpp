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

#include "mpath/tuner.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "mpath/error.hpp"
#include "mpath/exec_graph.hpp"
#include "mpath/pipeline.hpp"

namespace mpath {

std::vector<GridPoint> TuningGrid::points() const {
  auto paths = gpu_paths;
  auto chunks = max_chunks;
  std::sort(paths.begin(), paths.end());
  std::sort(chunks.begin(), chunks.end());
  std::vector<bool> hosts;
  if (std::find(host.begin(), host.end(), false) != host.end()) hosts.push_back(false);
  if (std::find(host.begin(), host.end(), true) != host.end()) hosts.push_back(true);
  std::vector<GridPoint> out;
  for (auto p : paths) {
    for (auto c : chunks) {
      for (bool h : hosts) out.push_back({p, h, c});
    }
  }
  return out;
}

const TuningEntry* TuningTable::find(Bytes size, ExecMode mode) const {
  const TuningEntry* best = nullptr;
  Bytes best_gap = 0;
  for (const auto& e : entries) {
    if (e.mode != mode) continue;
    Bytes gap = e.size > size ? e.size - size : size - e.size;
    if (!best || gap < best_gap || (gap == best_gap && e.size < best->size)) {
      best = &e;
      best_gap = gap;
    }
  }
  return best;
}

PathConfig config_for(const GridPoint& point, ExecMode mode, SharePolicy share_policy) {
  PathConfig c;
  c.num_gpu_paths = point.gpu_paths;
  c.host_path_enabled = point.host;
  c.max_chunks = point.max_chunks;
  c.graph_mode = mode == ExecMode::graph;
  c.share_policy = share_policy;
  return c;
}

std::optional<Seconds> evaluate_point(const Topology& topology, Bytes size, ExecMode mode,
                                      const GridPoint& point, const OverheadModel& model,
                                      const TuneOptions& options) {
  if (options.reuse_count < 1) throw ConfigError("reuse_count must be >= 1");
  auto config = config_for(point, mode, options.share_policy);
  PathSet paths;
  try {
    paths = plan_paths(topology, options.src, options.dst, config);
  } catch (const PlanError&) {
    return std::nullopt;
  }
  auto plan = make_chunk_plan(paths, size, config.max_chunks);
  if (mode == ExecMode::streamed) return simulate_streamed(topology, plan, model).makespan;
  auto graph = build_graph(plan);
  Seconds first = simulate_graph(topology, graph, model, true).makespan;
  Seconds steady = simulate_graph(topology, graph, model, false).makespan;
  const double reuse = options.reuse_count;
  return (first + (reuse - 1) * steady) / reuse;
}

TuningTable tune(const Topology& topology, const std::vector<Bytes>& sizes, const TuningGrid& grid,
                 const OverheadModel& model, const TuneOptions& options) {
  if (sizes.empty()) throw ConfigError("tune: empty size list");
  auto points = grid.points();
  if (points.empty()) throw ConfigError("tune: empty grid");
  auto sorted = sizes;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  TuningTable table;
  table.topology = topology.name();
  for (auto size : sorted) {
    for (auto mode : {ExecMode::streamed, ExecMode::graph}) {
      std::optional<TuningEntry> best;
      for (const auto& p : points) {
        auto t = evaluate_point(topology, size, mode, p, model, options);
        if (!t) continue;
        if (!best || *t < best->makespan) best = TuningEntry{size, mode, p, *t};
      }
      if (!best) {
        throw PlanError(fmt::format("no grid point can be planned on '{}'", topology.name()));
      }
      table.entries.push_back(*best);
    }
  }
  return table;
}

std::uint32_t best_chunks(const Topology& topology, Bytes size, ExecMode mode, std::uint32_t gpu_paths,
                          bool host, const OverheadModel& model, const TuneOptions& options,
                          const std::vector<std::uint32_t>& chunk_grid) {
  TuningGrid grid;
  grid.gpu_paths = {gpu_paths};
  grid.host = {host};
  grid.max_chunks = chunk_grid;
  std::optional<std::pair<Seconds, std::uint32_t>> best;
  for (const auto& p : grid.points()) {
    auto t = evaluate_point(topology, size, mode, p, model, options);
    if (!t) {
      throw PlanError(fmt::format("{} GPU paths (host {}) cannot be planned on '{}'", gpu_paths,
                                  host ? "on" : "off", topology.name()));
    }
    if (!best || *t < best->first) best = {*t, p.max_chunks};
  }
  if (!best) throw ConfigError("best_chunks: empty chunk grid");
  return best->second;
}

std::string tuning_table_csv(const TuningTable& table) {
  std::string out = "size,mode,gpu_paths,host,max_chunks,makespan\n";
  for (const auto& e : table.entries) {
    out += fmt::format("{},{},{},{},{},{}\n", e.size, to_string(e.mode), e.best.gpu_paths,
                       e.best.host ? "on" : "off", e.best.max_chunks, e.makespan);
  }
  return out;
}

namespace {

template <class T>
T field(std::string_view s, int lineno) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(fmt::format("tuning table line {}: bad value '{}'", lineno, s));
  }
  return v;
}

}  // namespace

TuningTable parse_tuning_table(std::string_view text) {
  TuningTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "size,mode,gpu_paths,host,max_chunks,makespan") {
        throw ConfigError(fmt::format("tuning table line {}: unexpected header", lineno));
      }
      header = true;
      continue;
    }
    std::vector<std::string_view> f;
    std::string_view rest = line;
    while (true) {
      auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 6) throw ConfigError(fmt::format("tuning table line {}: expected 6 fields", lineno));
    TuningEntry e;
    e.size = field<std::uint64_t>(f[0], lineno);
    if (f[1] == "graph") {
      e.mode = ExecMode::graph;
    } else if (f[1] == "streamed") {
      e.mode = ExecMode::streamed;
    } else {
      throw ConfigError(fmt::format("tuning table line {}: unknown mode '{}'", lineno, f[1]));
    }
    e.best.gpu_paths = field<std::uint32_t>(f[2], lineno);
    e.best.host = parse_flag(f[3]);
    e.best.max_chunks = field<std::uint32_t>(f[4], lineno);
    e.makespan = field<double>(f[5], lineno);
    if (e.best.gpu_paths == 0 || e.best.max_chunks == 0) {
      throw ConfigError(fmt::format("tuning table line {}: paths and chunks must be >= 1", lineno));
    }
    t.entries.push_back(e);
  }
  if (!header) throw ConfigError("tuning table: missing header");
  return t;
}

TuningTable load_tuning_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read tuning table '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_tuning_table(ss.str());
}

}  // namespace mpath
