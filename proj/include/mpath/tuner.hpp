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
#include <string_view>
#include <vector>

#include "mpath/overhead.hpp"
#include "mpath/path_planner.hpp"
#include "mpath/simkernel.hpp"
#include "mpath/topology.hpp"

namespace mpath {

struct GridPoint {
  std::uint32_t gpu_paths = 1;
  bool host = false;
  std::uint32_t max_chunks = 1;

  bool operator==(const GridPoint&) const = default;
};

struct TuningGrid {
  std::vector<std::uint32_t> gpu_paths{1, 2, 3};
  std::vector<bool> host{false, true};
  std::vector<std::uint32_t> max_chunks{1, 2, 4, 8, 16, 32};

  // Grid points in tie-break order: fewer paths, then fewer chunks, then host off.
  std::vector<GridPoint> points() const;
};

struct TuningEntry {
  Bytes size = 0;
  ExecMode mode = ExecMode::streamed;
  GridPoint best;
  Seconds makespan = 0;  // predicted per-message time at `best`

  bool operator==(const TuningEntry&) const = default;
};

struct TuningTable {
  std::string topology;
  std::vector<TuningEntry> entries;  // sizes ascending, streamed before graph

  // Entry for `mode` whose size is closest to `size` (ties go to the smaller).
  const TuningEntry* find(Bytes size, ExecMode mode) const;
};

struct TuneOptions {
  DeviceId src = DeviceId::accelerator(0);
  DeviceId dst = DeviceId::accelerator(1);
  SharePolicy share_policy = SharePolicy::bandwidth_proportional;
  // Graph mode spreads first-use cost over this many messages.
  std::uint32_t reuse_count = 1000;
};

PathConfig config_for(const GridPoint& point, ExecMode mode, SharePolicy share_policy);

// Predicted per-message time of one grid point. Streamed: one streamed
// transfer. Graph: (first + (reuse_count - 1) * steady) / reuse_count.
// Returns nullopt when the point cannot be planned on this topology.
std::optional<Seconds> evaluate_point(const Topology& topology, Bytes size, ExecMode mode,
                                      const GridPoint& point, const OverheadModel& model,
                                      const TuneOptions& options = {});

TuningTable tune(const Topology& topology, const std::vector<Bytes>& sizes, const TuningGrid& grid,
                 const OverheadModel& model, const TuneOptions& options = {});

// Best chunk count with paths and host fixed.
std::uint32_t best_chunks(const Topology& topology, Bytes size, ExecMode mode, std::uint32_t gpu_paths,
                          bool host, const OverheadModel& model, const TuneOptions& options = {},
                          const std::vector<std::uint32_t>& chunk_grid = {1, 2, 4, 8, 16, 32});

// CSV: size,mode,gpu_paths,host,max_chunks,makespan
std::string tuning_table_csv(const TuningTable& table);
TuningTable parse_tuning_table(std::string_view text);
TuningTable load_tuning_table_file(const std::string& path);

}  // namespace mpath
