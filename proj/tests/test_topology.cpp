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

#include <gtest/gtest.h>

#include <string>

#include "fixtures.hpp"
#include "mpath/error.hpp"
#include "mpath/topology.hpp"

using namespace mpath;

namespace {

const char* kSmall = R"(name = tiny
[device]
kind = host
[device]
kind = accelerator
index = 0
[device]
kind = accelerator
index = 1
[link]
a = 0
b = 1
bandwidth = 10e9
latency = 1e-6
sublinks = 3
[hostlink]
device = 1
bandwidth = 5e9
latency = 2e-6
)";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST(Topology, PresetsLoadWithExpectedShape) {
  for (const auto& name : preset_names()) {
    auto t = resolve_topology(name);
    EXPECT_EQ(t.name(), name);
    EXPECT_EQ(t.accelerator_count(), 4u);
    // 6 full-duplex pairs give 12 channels, 4 half-duplex host links give 4.
    EXPECT_EQ(t.channels().size(), 16u);
  }
}

TEST(Topology, NarvalPairBandwidthDoublesBeluga) {
  auto b = resolve_topology("beluga");
  auto n = resolve_topology("narval");
  auto cb = b.channel(b.channel_for(DeviceId::accelerator(0), DeviceId::accelerator(1)));
  auto cn = n.channel(n.channel_for(DeviceId::accelerator(0), DeviceId::accelerator(1)));
  EXPECT_DOUBLE_EQ(cn.bandwidth, 2 * cb.bandwidth);
}

TEST(Topology, FileBandwidthIsPerSublink) {
  auto t = load_topology(kSmall);
  auto c = t.channel(t.channel_for(DeviceId::accelerator(0), DeviceId::accelerator(1)));
  EXPECT_DOUBLE_EQ(c.bandwidth, 30e9);
  EXPECT_EQ(c.duplex, Duplex::full);
}

TEST(Topology, HostLinkDefaultsToHalfDuplexSharedChannel) {
  auto t = load_topology(kSmall);
  auto up = t.channel_for(DeviceId::accelerator(1), DeviceId::host());
  auto down = t.channel_for(DeviceId::host(), DeviceId::accelerator(1));
  EXPECT_EQ(up, down);
  EXPECT_EQ(t.channel(up).duplex, Duplex::half);
  EXPECT_FALSE(t.find_channel(DeviceId::accelerator(0), DeviceId::host()).has_value());
}

TEST(Topology, FullDuplexHasIndependentDirections) {
  auto t = fixture::mesh(3);
  EXPECT_NE(t.channel_for(DeviceId::accelerator(0), DeviceId::accelerator(2)),
            t.channel_for(DeviceId::accelerator(2), DeviceId::accelerator(0)));
}

TEST(Topology, ChannelNamesResolve) {
  auto t = resolve_topology("beluga");
  for (const auto& c : t.channels()) {
    auto found = t.find_channel_by_name(c.name);
    ASSERT_TRUE(found.has_value()) << c.name;
    EXPECT_EQ(*found, c.id);
  }
}

TEST(Topology, RejectsMalformedFiles) {
  const std::string s = kSmall;
  EXPECT_THROW(load_topology(replace(s, "[link]", "[lnk]")), ConfigError);
  EXPECT_THROW(load_topology(replace(s, "sublinks = 3", "sublinks = 3\nsublinks = 4")), ConfigError);
  EXPECT_THROW(load_topology(replace(s, "sublinks = 3", "colour = red")), ConfigError);
  EXPECT_THROW(load_topology(replace(s, "bandwidth = 10e9", "bandwidth = 0")), ConfigError);
  EXPECT_THROW(load_topology(replace(s, "bandwidth = 10e9", "bandwidth = fast")), ConfigError);
  EXPECT_THROW(load_topology(replace(s, "b = 1\n", "b = 0\n")), ConfigError);
  EXPECT_THROW(load_topology(replace(s, "index = 1", "index = 2")), ConfigError);
  EXPECT_THROW(load_topology(replace(s, "kind = host", "kind = accelerator\nindex = 5")), ConfigError);
  EXPECT_THROW(load_topology(replace(s, "latency = 1e-6\n", "")), ConfigError);
}

TEST(Topology, RejectsDuplicatePair) {
  std::string s = kSmall;
  s += "[link]\na = 1\nb = 0\nbandwidth = 1e9\nlatency = 0\n";
  EXPECT_THROW(load_topology(s), ConfigError);
}

TEST(Topology, MissingLinkIsPlanError) {
  auto t = fixture::sparse(3, {{0, 1}});
  EXPECT_THROW(t.channel_for(DeviceId::accelerator(0), DeviceId::accelerator(2)), PlanError);
}

TEST(Topology, UnknownPresetOrFileFails) { EXPECT_THROW(resolve_topology("/no/such/file.topo"), ConfigError); }

TEST(Topology, DeviceLabelsRoundTrip) {
  for (auto d : {DeviceId::host(), DeviceId::accelerator(0), DeviceId::accelerator(7)}) {
    EXPECT_EQ(parse_device_label(device_label(d)), d);
  }
  EXPECT_THROW(parse_device_label("gpu"), ConfigError);
}
