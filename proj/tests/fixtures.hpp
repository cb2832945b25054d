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

#include <string>
#include <utility>
#include <vector>

#include "mpath/topology.hpp"

namespace mpath::fixture {

// Fully connected accelerators plus a host linked to each of them.
inline Topology mesh(std::uint32_t n, double bandwidth = 1e9, Seconds latency = 0, double host_bandwidth = 0.5e9,
                     Duplex host_duplex = Duplex::half) {
  std::vector<DeviceId> devices{DeviceId::host()};
  std::vector<LinkSpec> links;
  for (std::uint32_t i = 0; i < n; ++i) devices.push_back(DeviceId::accelerator(i));
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      links.push_back({DeviceId::accelerator(i), DeviceId::accelerator(j), bandwidth, latency, Duplex::full, 1});
    }
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    links.push_back({DeviceId::accelerator(i), DeviceId::host(), host_bandwidth, latency, host_duplex, 1});
  }
  return Topology::build("mesh" + std::to_string(n), devices, links);
}

// Only the listed accelerator pairs are linked; no host links.
inline Topology sparse(std::uint32_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
                       double bandwidth = 1e9) {
  std::vector<DeviceId> devices{DeviceId::host()};
  for (std::uint32_t i = 0; i < n; ++i) devices.push_back(DeviceId::accelerator(i));
  std::vector<LinkSpec> links;
  for (auto [a, b] : pairs) {
    links.push_back({DeviceId::accelerator(a), DeviceId::accelerator(b), bandwidth, 0, Duplex::full, 1});
  }
  return Topology::build("sparse", devices, links);
}

}  // namespace mpath::fixture
