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

#include "mpath/graph_cache.hpp"

#include "mpath/error.hpp"

namespace mpath {

GraphCache::GraphCache(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw ConfigError("graph cache capacity must be >= 1");
}

const CachedGraph* GraphCache::lookup(const GraphKey& key) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  order_.splice(order_.begin(), order_, it->second.pos);
  it->second.entry.last_use = ++clock_;
  return &it->second.entry;
}

void GraphCache::insert(const GraphKey& key, ExecGraph graph, bool instantiated) {
  graph.key = key;
  CachedGraph entry{std::make_shared<const ExecGraph>(std::move(graph)), instantiated, ++clock_};
  if (auto it = entries_.find(key); it != entries_.end()) {
    order_.splice(order_.begin(), order_, it->second.pos);
    it->second.entry = std::move(entry);
    return;
  }
  if (entries_.size() == capacity_) {
    entries_.erase(order_.back());
    order_.pop_back();
    ++evictions_;
  }
  order_.push_front(key);
  entries_.emplace(key, Slot{order_.begin(), std::move(entry)});
}

std::vector<GraphKey> GraphCache::keys_by_recency() const { return {order_.begin(), order_.end()}; }

CacheLookup cache_get_or_build(GraphCache& cache, const GraphKey& key, const ChunkPlan& plan) {
  if (const auto* hit = cache.lookup(key)) return {hit->graph, true};
  cache.insert(key, build_graph(plan));
  return {cache.lookup(key)->graph, false};
}

}  // namespace mpath
