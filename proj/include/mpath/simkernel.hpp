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
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mpath/exec_graph.hpp"
#include "mpath/overhead.hpp"
#include "mpath/pipeline.hpp"
#include "mpath/topology.hpp"

namespace mpath {

enum class ExecMode { graph, streamed };

std::string to_string(ExecMode mode);

struct SimTask {
  CopyNode node;
  std::uint32_t transfer = 0;  // index of the transfer in a concurrent run
  Seconds ready_time = 0;
  Seconds start_time = 0;
  Seconds end_time = 0;
};

struct BusyInterval {
  Seconds start = 0;
  Seconds end = 0;
  std::uint32_t task = 0;  // index into Timeline::tasks
};

struct Timeline {
  std::vector<SimTask> tasks;  // node id order
  std::map<ChannelId, std::vector<BusyInterval>> channel_busy;  // sorted by start
  Seconds start = 0;       // arrival of the transfer
  Seconds device_ready = 0;  // host-side work done; first copy may start
  Seconds finish = 0;      // last copy end + final synchronization
  Seconds makespan = 0;    // finish - start
  Bytes bytes_moved = 0;   // payload delivered to the destination
  std::uint32_t lanes = 0;
  PhaseCosts overhead;
  Seconds contention_queue_time = 0;  // sum of (start - ready) over tasks
};

struct SimReport {
  Seconds makespan = 0;
  double bandwidth = 0;  // bytes/s
  PhaseCosts overhead;
  Seconds contention_queue_time = 0;
};

SimReport make_report(const Timeline& timeline);

struct TransferJob {
  std::shared_ptr<const ExecGraph> graph;
  ExecMode mode = ExecMode::graph;
  bool first_time = false;  // graph mode: pay creation/construction/instantiation
  Seconds arrival = 0;
  // Transfers with the same issuer share one host thread, so their host-side
  // costs serialize; device work of earlier transfers overlaps later launches.
  std::uint32_t issuer = 0;
};

// Host cost is charged before the first copy becomes ready; each lane then
// runs FIFO, staged second hops wait for their first hop, and every channel
// carries one copy at a time (FIFO by ready time, then arrival order, then
// node id). A copy takes latency + length / bandwidth.
Timeline simulate_graph(const Topology& topology, const ExecGraph& graph, const OverheadModel& model,
                        bool first_time, Seconds start = 0);

// Same device semantics; host cost is submit_cost per copy plus event_cost
// per cross-lane dependency.
Timeline simulate_streamed(const Topology& topology, const ChunkPlan& plan, const OverheadModel& model,
                           Seconds start = 0);

// All transfers contend for the same channels. Returns one timeline per job.
std::vector<Timeline> simulate_concurrent(const Topology& topology, const std::vector<TransferJob>& jobs,
                                          const OverheadModel& model);

// Host-side cost of one transfer before its copies may start.
PhaseCosts host_costs(const OverheadModel& model, const ExecGraph& graph, ExecMode mode,
                      bool first_time);

// Tasks of several timelines with channel occupancy merged; transfer ids are
// preserved.
Timeline merge_timelines(const std::vector<Timeline>& timelines);

// CSV: task_id,path,role,channel,start,end,offset,length, then a trailing
// "# makespan,<seconds>" comment line.
std::string timeline_csv(const Topology& topology, const Timeline& timeline);

// Channel names are interned in first-seen order; the topology is not needed.
struct ParsedTimeline {
  Timeline timeline;
  std::vector<std::string> channel_names;  // indexed by ChannelId::value
};
ParsedTimeline parse_timeline_csv(std::string_view text);

}  // namespace mpath
