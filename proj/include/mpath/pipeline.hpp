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
#include <vector>

#include "mpath/path_planner.hpp"
#include "mpath/units.hpp"

namespace mpath {

struct ChunkAssignment {
  std::size_t path_index = 0;
  Bytes src_offset = 0;
  Bytes dst_offset = 0;  // equal to src_offset: both buffers share a layout
  Bytes length = 0;
  std::uint32_t seq = 0;  // dense per path, from 0

  bool operator==(const ChunkAssignment&) const = default;
};

struct ChunkPlan {
  Bytes total_size = 0;
  std::vector<ChunkAssignment> chunks;  // issue order
  PathSet path_set;

  std::size_t chunk_count(std::size_t path_index) const;
};

// Nominal chunk length for path p is ceil(size * share[p] / max_chunks).
// Chunks are issued round-robin over the paths in path order at consecutive
// offsets until the message is covered; the last chunk is truncated.
ChunkPlan make_chunk_plan(const PathSet& path_set, Bytes size, std::uint32_t max_chunks);

Bytes nominal_chunk_length(Bytes size, double share, std::uint32_t max_chunks);

// One FIFO lane per direct path, two per staged path (one per hop).
struct LaneEntry {
  std::size_t chunk = 0;  // index into ChunkPlan::chunks
  int hop = 0;            // 0 for direct/first hop, 1 for the second hop
  bool operator==(const LaneEntry&) const = default;
};

struct Lane {
  std::size_t path_index = 0;
  int hop = 0;
  std::vector<LaneEntry> entries;  // in seq order
};

struct LaneSchedule {
  std::vector<Lane> lanes;
  // Cross-lane dependencies: (hop-1 entry, hop-2 entry) of each staged chunk.
  std::vector<std::pair<LaneEntry, LaneEntry>> dependencies;
};

LaneSchedule lane_schedule(const ChunkPlan& plan);

}  // namespace mpath
