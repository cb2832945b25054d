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
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mpath/pipeline.hpp"
#include "mpath/topology.hpp"

namespace mpath {

enum class NodeRole { direct, stage_hop1, stage_hop2 };

std::string to_string(NodeRole role);
NodeRole parse_node_role(std::string_view text);

struct CopyNode {
  std::uint32_t id = 0;
  DeviceId src_dev;
  DeviceId dst_dev;
  ChannelId channel;
  Bytes offset = 0;
  Bytes length = 0;
  std::uint32_t lane = 0;
  NodeRole role = NodeRole::direct;
  std::uint32_t path = 0;   // index into the PathSet
  std::uint32_t chunk = 0;  // index into ChunkPlan::chunks

  bool operator==(const CopyNode&) const = default;
};

struct GraphKey {
  std::uint64_t src_buffer_id = 0;
  std::uint64_t dst_buffer_id = 0;
  Bytes size = 0;
  std::uint64_t config_digest = 0;

  bool operator==(const GraphKey&) const = default;
};

struct GraphKeyHash {
  std::size_t operator()(const GraphKey& k) const;
};

struct ExecGraph {
  std::vector<CopyNode> nodes;  // id == position
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  GraphKey key;
  Bytes total_size = 0;
  std::uint32_t lane_count = 0;

  bool operator==(const ExecGraph&) const = default;
};

// One node per (chunk, hop) in chunk issue order; one edge per staged chunk
// from its first hop to its second.
ExecGraph build_graph(const ChunkPlan& plan);

// Closed forms: sum over paths of chunks * hops, and staged chunk count.
std::size_t expected_node_count(const ChunkPlan& plan);
std::size_t expected_edge_count(const ChunkPlan& plan);

// Stable 64-bit digest of everything that shapes the graph.
std::uint64_t config_digest(const PathConfig& config, const PathSet& path_set);

GraphKey graph_key(std::uint64_t src_buffer, std::uint64_t dst_buffer, Bytes size,
                   const PathConfig& config, const PathSet& path_set);

// Kahn's algorithm; empty when the graph has a cycle.
std::vector<std::uint32_t> topological_order(const ExecGraph& graph);
bool is_acyclic(const ExecGraph& graph);

// Text edge list:
//   # graph size=<bytes> lanes=<n>
//   node <id> <role> <src>-><dst> <offset> <len>
//   edge <from> <to>
std::string dump_graph(const ExecGraph& graph);

// Inverse of dump_graph for the fields the dump carries (channels, lanes and
// path indices are not recorded and come back zero).
ExecGraph parse_graph_dump(std::string_view text);

}  // namespace mpath
