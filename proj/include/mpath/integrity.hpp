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
#include <string>
#include <utility>
#include <vector>

#include "mpath/exec_graph.hpp"
#include "mpath/pipeline.hpp"
#include "mpath/simkernel.hpp"

namespace mpath {

// A byte range that is written zero times (gap) or more than once (overlap).
struct CoverageFault {
  Bytes offset = 0;
  Bytes length = 0;
  std::uint32_t writes = 0;
};

struct OrderingViolation {
  std::uint32_t chunk = 0;
  std::string detail;
};

struct ContentionViolation {
  ChannelId channel;
  std::uint32_t first_task = 0;   // task indices within the checked timeline
  std::uint32_t second_task = 0;
};

struct IntegrityReport {
  bool coverage_ok = true;
  std::vector<CoverageFault> coverage_faults;
  std::vector<OrderingViolation> ordering_violations;
  std::vector<ContentionViolation> contention_violations;
  bool completion_ok = true;

  bool all_clear() const {
    return coverage_ok && completion_ok && ordering_violations.empty() && contention_violations.empty();
  }
  IntegrityReport& operator+=(const IntegrityReport& o);
};

// Every byte of [0, total_size) must be written exactly once.
IntegrityReport check_coverage(Bytes total_size, std::vector<std::pair<Bytes, Bytes>> ranges);
IntegrityReport check_coverage(const ChunkPlan& plan);

// Ordering (second hops start after their first hop ends), exclusive channel
// occupancy, final synchronization after every copy, plus coverage of the
// bytes delivered to the destination. Throws ConfigError when the timeline
// does not belong to the graph.
IntegrityReport check_timeline(const ExecGraph& graph, const Timeline& timeline);
IntegrityReport check_timeline(const ChunkPlan& plan, const Timeline& timeline);

// Per-transfer checks plus channel exclusivity across all transfers.
IntegrityReport check_concurrent(const std::vector<const ExecGraph*>& graphs,
                                 const std::vector<Timeline>& timelines);

// Channel exclusivity alone.
std::vector<ContentionViolation> check_contention(const Timeline& timeline);

std::string summarize(const IntegrityReport& report);

}  // namespace mpath
