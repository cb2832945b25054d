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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mpath/topology.hpp"

namespace mpath {

enum class PathVariant { direct, gpu_staged, host_staged };

struct PathKind {
  PathVariant variant = PathVariant::direct;
  DeviceId stage;  // meaningful for gpu_staged and host_staged

  static PathKind direct() { return {}; }
  static PathKind gpu_staged(DeviceId stage) { return {PathVariant::gpu_staged, stage}; }
  static PathKind host_staged() { return {PathVariant::host_staged, DeviceId::host()}; }

  bool staged() const { return variant != PathVariant::direct; }
  bool operator==(const PathKind&) const = default;
};

struct Hop {
  ChannelId channel;
  DeviceId from;
  DeviceId to;
  bool operator==(const Hop&) const = default;
};

struct Path {
  PathKind kind;
  std::vector<Hop> hops;  // 1 for direct, 2 for staged
  double share = 0;       // fraction of the message in [0, 1]
  bool operator==(const Path&) const = default;
};

enum class SharePolicy { equal, bandwidth_proportional };

struct PathConfig {
  std::uint32_t num_gpu_paths = 1;  // path 1 is always direct
  bool host_path_enabled = false;
  std::uint32_t max_chunks = 1;  // per path
  bool graph_mode = false;
  std::uint32_t cache_capacity = 64;
  SharePolicy share_policy = SharePolicy::bandwidth_proportional;

  bool operator==(const PathConfig&) const = default;
};

// Throws ConfigError when a knob is out of range.
void validate(const PathConfig& config);

std::string to_string(SharePolicy policy);
SharePolicy parse_share_policy(std::string_view text);

// Environment knobs: MP_NUM_GPU_PATHS, MP_ENABLE_HOST_PATH, MP_MAX_CHUNKS,
// MP_ENABLE_GRAPH, MP_GRAPH_CACHE_SIZE, MP_SHARE_POLICY. Unset variables keep
// the value already in `base`.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
PathConfig config_from_env(const EnvLookup& env, PathConfig base = {});
bool parse_flag(std::string_view text);

struct PathSet {
  DeviceId src;
  DeviceId dst;
  std::vector<Path> paths;
  bool operator==(const PathSet&) const = default;
};

// Direct first, then GPU-staged paths through the lowest-index eligible
// accelerators, then the host path when enabled.
PathSet plan_paths(const Topology& topology, DeviceId src, DeviceId dst, const PathConfig& config);

struct ContentionPlan {
  std::vector<PathSet> path_sets;  // one per transfer, same order
  std::size_t shared_channels = 0;  // channels used by two or more transfers
  bool contended = false;           // true when shared_channels > 0
};

// Chooses staging devices for a set of concurrent transfers so that no
// directed channel is used by two different transfers. When that is
// impossible, returns the assignment minimizing the number of shared channels
// (first such assignment in ascending staging order) and flags it.
ContentionPlan plan_contention_free(const Topology& topology,
                                    const std::vector<std::pair<DeviceId, DeviceId>>& transfers,
                                    const PathConfig& config);

// Channels used by two or more of the given path sets.
std::size_t count_shared_channels(const std::vector<PathSet>& path_sets);

}  // namespace mpath
