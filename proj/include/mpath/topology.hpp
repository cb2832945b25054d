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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpath/units.hpp"

namespace mpath {

enum class DeviceKind { accelerator, host };

struct DeviceId {
  DeviceKind kind = DeviceKind::accelerator;
  std::uint32_t index = 0;

  static constexpr DeviceId accelerator(std::uint32_t i) { return {DeviceKind::accelerator, i}; }
  static constexpr DeviceId host() { return {DeviceKind::host, 0}; }

  bool is_host() const { return kind == DeviceKind::host; }
  auto operator<=>(const DeviceId&) const = default;
};

// "0", "1", ... for accelerators, "host" for the host.
std::string device_label(DeviceId id);
DeviceId parse_device_label(std::string_view label);

enum class Duplex { full, half };

struct LinkSpec {
  DeviceId a;
  DeviceId b;
  double bandwidth = 0;  // aggregate bytes/s per direction channel
  Seconds latency = 0;   // per transfer
  Duplex duplex = Duplex::full;
  std::uint32_t sublinks = 1;

  bool is_host_link() const { return a.is_host() || b.is_host(); }
};

// A directed (full duplex) or shared (half duplex) transmission resource.
struct ChannelId {
  std::uint32_t value = 0;
  auto operator<=>(const ChannelId&) const = default;
};

struct ChannelInfo {
  ChannelId id;
  std::size_t link = 0;  // index into Topology::links()
  DeviceId from;         // for half duplex: the link's a endpoint
  DeviceId to;
  double bandwidth = 0;
  Seconds latency = 0;
  Duplex duplex = Duplex::full;
  std::string name;  // "0->1", or "0<->host" for a shared channel
};

class Topology {
 public:
  // Validates every invariant and derives the channel table. Throws
  // ConfigError naming the offending entry.
  static Topology build(std::string name, std::vector<DeviceId> devices,
                        std::vector<LinkSpec> links);

  const std::string& name() const { return name_; }
  const std::vector<DeviceId>& devices() const { return devices_; }
  const std::vector<LinkSpec>& links() const { return links_; }
  const std::vector<ChannelInfo>& channels() const { return channels_; }
  std::uint32_t accelerator_count() const { return accelerators_; }

  const ChannelInfo& channel(ChannelId id) const;
  std::optional<ChannelId> find_channel(DeviceId src, DeviceId dst) const;
  // Throws PlanError when no link joins src and dst.
  ChannelId channel_for(DeviceId src, DeviceId dst) const;
  bool has_link(DeviceId a, DeviceId b) const { return find_link(a, b).has_value(); }
  std::optional<std::size_t> find_link(DeviceId a, DeviceId b) const;
  std::optional<ChannelId> find_channel_by_name(std::string_view name) const;

  bool operator==(const Topology&) const;

 private:
  std::string name_;
  std::vector<DeviceId> devices_;
  std::vector<LinkSpec> links_;
  std::vector<ChannelInfo> channels_;
  std::uint32_t accelerators_ = 0;
};

bool operator==(const LinkSpec& x, const LinkSpec& y);
bool operator==(const ChannelInfo& x, const ChannelInfo& y);

// Parses the sectioned topology format:
//
//   name = beluga
//   [device]      kind = accelerator|host, index = N
//   [link]        a, b, bandwidth (per sublink), latency, duplex, sublinks
//   [hostlink]    device, bandwidth, latency, duplex
//
// '#' starts a comment. Each section header opens one record.
Topology load_topology(std::string_view source);
Topology load_topology_file(const std::string& path);

// Compiled-in presets ("beluga", "narval").
std::optional<std::string_view> preset_text(std::string_view name);
std::vector<std::string> preset_names();

// Preset name or path to a .topo file.
Topology resolve_topology(std::string_view preset_or_path);

// One-line summary: "beluga: 4 accelerators, 6 links, 4 host links, 16 channels".
std::string describe(const Topology& topology);

}  // namespace mpath
