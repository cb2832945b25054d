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
#include <list>
#include <memory>
#include <unordered_map>
#include <vector>

#include "mpath/exec_graph.hpp"

namespace mpath {

struct CachedGraph {
  std::shared_ptr<const ExecGraph> graph;
  bool instantiated = false;
  std::uint64_t last_use = 0;  // logical clock
};

// Fixed-capacity LRU map from GraphKey to instantiated graphs. Single owner;
// not thread safe.
class GraphCache {
 public:
  explicit GraphCache(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(const GraphKey& key) const { return entries_.count(key) != 0; }

  // Hit: bumps recency and returns the entry. Miss: nullptr.
  const CachedGraph* lookup(const GraphKey& key);

  // Inserts (or replaces) key as most recent, evicting the least recent entry
  // when full.
  void insert(const GraphKey& key, ExecGraph graph, bool instantiated = true);

  // Most recent first.
  std::vector<GraphKey> keys_by_recency() const;

  std::uint64_t evictions() const { return evictions_; }

 private:
  using Order = std::list<GraphKey>;
  struct Slot {
    Order::iterator pos;
    CachedGraph entry;
  };

  std::size_t capacity_;
  std::uint64_t clock_ = 0;
  std::uint64_t evictions_ = 0;
  Order order_;  // front = most recent
  std::unordered_map<GraphKey, Slot, GraphKeyHash> entries_;
};

struct CacheLookup {
  std::shared_ptr<const ExecGraph> graph;
  bool hit = false;
};

// On a miss the graph is built from `plan`, instantiated and inserted.
CacheLookup cache_get_or_build(GraphCache& cache, const GraphKey& key, const ChunkPlan& plan);

}  // namespace mpath
