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

#include "mpath/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mpath/error.hpp"

namespace mpath {

std::size_t ChunkPlan::chunk_count(std::size_t path_index) const {
  return static_cast<std::size_t>(std::count_if(
      chunks.begin(), chunks.end(), [&](const auto& c) { return c.path_index == path_index; }));
}

Bytes nominal_chunk_length(Bytes size, double share, std::uint32_t max_chunks) {
  if (share <= 0) return 0;
  long double exact = static_cast<long double>(size) * share / max_chunks;
  return static_cast<Bytes>(std::ceil(exact));
}

ChunkPlan make_chunk_plan(const PathSet& path_set, Bytes size, std::uint32_t max_chunks) {
  if (size == 0) throw PlanError("cannot plan a zero-byte transfer");
  if (max_chunks == 0) throw PlanError("max_chunks must be >= 1");
  if (path_set.paths.empty()) throw PlanError("path set has no paths");

  std::vector<Bytes> nominal;
  for (const auto& p : path_set.paths) nominal.push_back(nominal_chunk_length(size, p.share, max_chunks));
  if (std::all_of(nominal.begin(), nominal.end(), [](Bytes b) { return b == 0; })) {
    throw PlanError("every path has a zero share");
  }

  ChunkPlan plan;
  plan.total_size = size;
  plan.path_set = path_set;
  std::vector<std::uint32_t> seq(path_set.paths.size(), 0);
  Bytes cursor = 0;
  while (cursor < size) {
    for (std::size_t p = 0; p < nominal.size() && cursor < size; ++p) {
      if (nominal[p] == 0) continue;
      Bytes len = std::min(nominal[p], size - cursor);
      plan.chunks.push_back({p, cursor, cursor, len, seq[p]++});
      cursor += len;
    }
  }
  return plan;
}

LaneSchedule lane_schedule(const ChunkPlan& plan) {
  LaneSchedule out;
  // lane_of[p] = index of the first lane of path p
  std::vector<std::size_t> lane_of(plan.path_set.paths.size());
  for (std::size_t p = 0; p < plan.path_set.paths.size(); ++p) {
    lane_of[p] = out.lanes.size();
    out.lanes.push_back({p, 0, {}});
    if (plan.path_set.paths[p].kind.staged()) out.lanes.push_back({p, 1, {}});
  }
  for (std::size_t i = 0; i < plan.chunks.size(); ++i) {
    const auto& c = plan.chunks[i];
    if (c.path_index >= plan.path_set.paths.size()) {
      throw PlanError(fmt::format("chunk {} refers to missing path {}", i, c.path_index));
    }
    out.lanes[lane_of[c.path_index]].entries.push_back({i, 0});
    if (plan.path_set.paths[c.path_index].kind.staged()) {
      out.lanes[lane_of[c.path_index] + 1].entries.push_back({i, 1});
      out.dependencies.push_back({{i, 0}, {i, 1}});
    }
  }
  return out;
}

}  // namespace mpath
