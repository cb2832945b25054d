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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "mpath/units.hpp"

namespace mpath {

enum class Phase { creation, construction, instantiation, launch };

inline constexpr std::array<Phase, 4> kAllPhases = {Phase::creation, Phase::construction,
                                                    Phase::instantiation, Phase::launch};

std::string to_string(Phase phase);
Phase parse_phase(std::string_view text);  // throws ConfigError on unknown names

// cost = fixed + per_node * n
struct AffineCost {
  Seconds fixed = 0;
  Seconds per_node = 0;

  Seconds at(std::uint64_t nodes) const { return fixed + per_node * static_cast<double>(nodes); }
};

// Host-side cost of driving a transfer. Graph mode pays the four lifecycle
// phases (all but launch only on first use); streamed mode pays submit_cost
// per copy plus event_cost per cross-lane dependency. Both pay event_cost per
// lane for the final synchronization.
struct OverheadModel {
  AffineCost creation{20e-6, 2e-6};
  AffineCost construction{10e-6, 3e-6};
  AffineCost instantiation{0.3e-3, 0.08e-3};
  AffineCost launch{5e-6, 1.5e-6};
  Seconds submit_cost = 7e-6;
  Seconds event_cost = 2e-6;

  const AffineCost& phase(Phase p) const;
  AffineCost& phase(Phase p);

  static OverheadModel zero() { return {{}, {}, {}, {}, 0, 0}; }
};

// Throws ConfigError on negative coefficients.
void validate(const OverheadModel& model);

// Phases other than launch cost nothing once the graph exists.
Seconds lifecycle_cost(const OverheadModel& model, std::uint64_t nodes, bool first_time, Phase phase);

struct PhaseCosts {
  Seconds creation = 0;
  Seconds construction = 0;
  Seconds instantiation = 0;
  Seconds launch = 0;
  Seconds submit = 0;  // streamed mode
  Seconds event = 0;   // streamed dependency events and final sync

  Seconds graph_total() const { return creation + construction + instantiation + launch; }
  Seconds total() const { return graph_total() + submit + event; }
  Seconds get(Phase p) const;
  PhaseCosts& operator+=(const PhaseCosts& o);
};

PhaseCosts graph_host_costs(const OverheadModel& model, std::uint64_t nodes, bool first_time);

// key = value lines, e.g. "instantiation.fixed = 0.3e-3", "submit_cost = 7e-6".
// Keys not present keep the defaults.
OverheadModel load_overhead_model(std::string_view text);
OverheadModel load_overhead_model_file(const std::string& path);

}  // namespace mpath
