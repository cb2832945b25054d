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

// Independent reference implementations used by the tests. None of these call
// into the library's own checkers.

#include <algorithm>
#include <cstdint>
#include <list>
#include <map>
#include <utility>
#include <vector>

#include "mpath/exec_graph.hpp"
#include "mpath/simkernel.hpp"

namespace mpath::oracle {

// Literal byte histogram; only for sizes that fit comfortably in memory.
inline bool byte_histogram_exact(std::uint64_t total, const std::vector<std::pair<std::uint64_t, std::uint64_t>>& ranges) {
  std::vector<std::uint8_t> hits(total, 0);
  for (auto [off, len] : ranges) {
    if (off + len > total) return false;
    for (std::uint64_t b = off; b < off + len; ++b) {
      if (hits[b] == 255) return false;
      ++hits[b];
    }
  }
  return std::all_of(hits.begin(), hits.end(), [](std::uint8_t h) { return h == 1; });
}

// Histogram over coordinate-compressed segments: every byte between two
// consecutive range boundaries has the same write count.
inline bool compressed_histogram_exact(std::uint64_t total,
                                       const std::vector<std::pair<std::uint64_t, std::uint64_t>>& ranges) {
  std::vector<std::uint64_t> cuts{0, total};
  for (auto [off, len] : ranges) {
    if (off + len > total) return false;
    cuts.push_back(off);
    cuts.push_back(off + len);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<std::int64_t> diff(cuts.size() + 1, 0);
  auto idx = [&](std::uint64_t x) { return std::lower_bound(cuts.begin(), cuts.end(), x) - cuts.begin(); };
  for (auto [off, len] : ranges) {
    if (len == 0) continue;
    ++diff[idx(off)];
    --diff[idx(off + len)];
  }
  std::int64_t count = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    count += diff[i];
    if (cuts[i + 1] > cuts[i] && count != 1) return false;
  }
  return true;
}

// All pairs of overlapping busy intervals on one channel, O(n^2).
inline std::size_t pairwise_overlaps(const Timeline& tl) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < tl.tasks.size(); ++i) {
    for (std::size_t j = i + 1; j < tl.tasks.size(); ++j) {
      const auto& a = tl.tasks[i];
      const auto& b = tl.tasks[j];
      if (a.node.channel != b.node.channel) continue;
      if (a.start_time < b.end_time && b.start_time < a.end_time) ++n;
    }
  }
  return n;
}

// Reference LRU: a plain vector, most recent at the back, linear scans.
class ReferenceLru {
 public:
  explicit ReferenceLru(std::size_t capacity) : capacity_(capacity) {}

  bool access(std::uint64_t key) {
    auto it = std::find(keys_.begin(), keys_.end(), key);
    if (it != keys_.end()) {
      keys_.erase(it);
      keys_.push_back(key);
      return true;
    }
    if (keys_.size() == capacity_) keys_.erase(keys_.begin());
    keys_.push_back(key);
    return false;
  }

  // Most recent first.
  std::vector<std::uint64_t> retained() const { return {keys_.rbegin(), keys_.rend()}; }

 private:
  std::size_t capacity_;
  std::vector<std::uint64_t> keys_;
};

// Counts from a graph dump text, independent of ExecGraph.
struct DumpCounts {
  std::size_t nodes = 0;
  std::size_t edges = 0;
};

inline DumpCounts count_dump(const std::string& text) {
  DumpCounts c;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (line.rfind("node ", 0) == 0) ++c.nodes;
    if (line.rfind("edge ", 0) == 0) ++c.edges;
    pos = end + 1;
  }
  return c;
}

}  // namespace mpath::oracle
