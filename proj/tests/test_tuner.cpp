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

#include "fixtures.hpp"
#include "mpath/error.hpp"
#include "mpath/tuner.hpp"

using namespace mpath;

TEST(Tuner, GridOrderEncodesTieBreak) {
  auto pts = TuningGrid{}.points();
  ASSERT_EQ(pts.size(), 36u);
  EXPECT_EQ(pts[0], (GridPoint{1, false, 1}));
  EXPECT_EQ(pts[1], (GridPoint{1, true, 1}));
  EXPECT_EQ(pts[2], (GridPoint{1, false, 2}));
  EXPECT_EQ(pts.back(), (GridPoint{3, true, 32}));
}

TEST(Tuner, TinyStreamedPrefersBaseline) {
  auto t = resolve_topology("beluga");
  auto table = tune(t, {64}, TuningGrid{}, OverheadModel{});
  auto e = table.find(64, ExecMode::streamed);
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->best, (GridPoint{1, false, 1}));
}

TEST(Tuner, LargeZeroOverheadPrefersMostPaths) {
  auto t = fixture::mesh(4, 1e9, 0, 0.5e9);
  auto table = tune(t, {256 * MiB}, TuningGrid{}, OverheadModel::zero());
  for (const auto& e : table.entries) EXPECT_EQ(e.best.gpu_paths, 3u);
}

TEST(Tuner, GraphAndStreamedDifferForSmallSizes) {
  auto t = resolve_topology("beluga");
  auto table = tune(t, {4 * MiB, 8 * MiB}, TuningGrid{}, OverheadModel{});
  EXPECT_NE(table.find(4 * MiB, ExecMode::graph)->best, table.find(4 * MiB, ExecMode::streamed)->best);
  // Without reuse, graph setup cost grows with node count, so graph mode
  // settles for fewer nodes than streamed mode.
  TuneOptions once;
  once.reuse_count = 1;
  auto cold = tune(t, {8 * MiB}, TuningGrid{}, OverheadModel{}, once);
  const auto& g = cold.find(8 * MiB, ExecMode::graph)->best;
  const auto& s = cold.find(8 * MiB, ExecMode::streamed)->best;
  EXPECT_LT(g.gpu_paths * g.max_chunks, s.gpu_paths * s.max_chunks);
}

TEST(Tuner, BestIsArgminAndReproducible) {
  auto t = resolve_topology("narval");
  TuningGrid grid;
  const std::vector<Bytes> sizes{4 * MiB, 64 * MiB};
  auto table = tune(t, sizes, grid, OverheadModel{});
  ASSERT_EQ(table.entries.size(), 4u);
  for (const auto& e : table.entries) {
    auto again = evaluate_point(t, e.size, e.mode, e.best, OverheadModel{});
    ASSERT_TRUE(again);
    EXPECT_EQ(*again, e.makespan);
    for (const auto& p : grid.points()) {
      auto v = evaluate_point(t, e.size, e.mode, p, OverheadModel{});
      if (v) EXPECT_GE(*v, e.makespan);
    }
    auto baseline = evaluate_point(t, e.size, ExecMode::streamed, GridPoint{1, false, 1}, OverheadModel{});
    EXPECT_LE(e.makespan, *baseline);
  }
  EXPECT_EQ(tuning_table_csv(table), tuning_table_csv(tune(t, sizes, grid, OverheadModel{})));
}

TEST(Tuner, UnplannablePointsSkipped) {
  auto t = fixture::mesh(2);
  auto table = tune(t, {MiB}, TuningGrid{}, OverheadModel{});
  for (const auto& e : table.entries) EXPECT_EQ(e.best.gpu_paths, 1u);
}

TEST(Tuner, TableCsvRoundTrips) {
  auto t = resolve_topology("beluga");
  auto table = tune(t, {MiB, 32 * MiB}, TuningGrid{}, OverheadModel{});
  auto back = parse_tuning_table(tuning_table_csv(table));
  EXPECT_EQ(back.entries, table.entries);
  EXPECT_THROW(parse_tuning_table("size,mode\n1,graph\n"), ConfigError);
}

TEST(Tuner, FindPicksNearestSize) {
  TuningTable table;
  table.entries = {{MiB, ExecMode::graph, {1, false, 1}, 1}, {64 * MiB, ExecMode::graph, {3, false, 16}, 1}};
  EXPECT_EQ(table.find(2 * MiB, ExecMode::graph)->size, MiB);
  EXPECT_EQ(table.find(60 * MiB, ExecMode::graph)->size, 64 * MiB);
  EXPECT_EQ(table.find(MiB, ExecMode::streamed), nullptr);
}

TEST(Tuner, EmptySizesRejected) {
  EXPECT_THROW(tune(resolve_topology("beluga"), {}, TuningGrid{}, OverheadModel{}), ConfigError);
}
