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

#include "mpath/error.hpp"
#include "mpath/overhead.hpp"

using namespace mpath;

TEST(Overhead, DefaultInstantiationAt34NodesIsAboutThreeMs) {
  EXPECT_NEAR(lifecycle_cost(OverheadModel{}, 34, true, Phase::instantiation), 3.02e-3, 1e-12);
}

TEST(Overhead, SteadyStateOnlyPaysLaunch) {
  OverheadModel m;
  for (auto p : kAllPhases) {
    const auto c = lifecycle_cost(m, 10, false, p);
    if (p == Phase::launch) {
      EXPECT_DOUBLE_EQ(c, m.launch.at(10));
    } else {
      EXPECT_EQ(c, 0.0);
    }
  }
}

TEST(Overhead, InstantiationDominatesFirstIterationLaunchDominatesLater) {
  OverheadModel m;
  for (std::uint64_t n = 1; n <= 200; ++n) {
    auto first = graph_host_costs(m, n, true);
    for (auto p : kAllPhases) {
      if (p != Phase::instantiation) EXPECT_GT(first.instantiation, first.get(p)) << n;
    }
    auto later = graph_host_costs(m, n, false);
    EXPECT_DOUBLE_EQ(later.graph_total(), later.launch);
  }
}

TEST(Overhead, ZeroNodesRejected) { EXPECT_THROW(lifecycle_cost(OverheadModel{}, 0, true, Phase::launch), ConfigError); }

TEST(Overhead, PhaseNamesRoundTrip) {
  for (auto p : kAllPhases) EXPECT_EQ(parse_phase(to_string(p)), p);
  EXPECT_THROW(parse_phase("compile"), ConfigError);
}

TEST(Overhead, LoadModelOverridesOnlyGivenKeys) {
  auto m = load_overhead_model("# refit\ninstantiation.fixed = 1e-3\nlaunch.per_node=2e-6\nsubmit_cost = 9e-6\n");
  EXPECT_DOUBLE_EQ(m.instantiation.fixed, 1e-3);
  EXPECT_DOUBLE_EQ(m.instantiation.per_node, OverheadModel{}.instantiation.per_node);
  EXPECT_DOUBLE_EQ(m.launch.per_node, 2e-6);
  EXPECT_DOUBLE_EQ(m.submit_cost, 9e-6);
  EXPECT_THROW(load_overhead_model("compile.fixed = 1\n"), ConfigError);
  EXPECT_THROW(load_overhead_model("launch.fixed = -1\n"), ConfigError);
  EXPECT_THROW(load_overhead_model("launch.fixed = soon\n"), ConfigError);
}

TEST(Overhead, PhaseCostsAccumulate) {
  PhaseCosts a = graph_host_costs(OverheadModel{}, 4, true);
  PhaseCosts b = a;
  b += a;
  EXPECT_DOUBLE_EQ(b.total(), 2 * a.total());
}
