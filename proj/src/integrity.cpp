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

#include "mpath/integrity.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "mpath/error.hpp"

namespace mpath {

IntegrityReport& IntegrityReport::operator+=(const IntegrityReport& o) {
  coverage_ok = coverage_ok && o.coverage_ok;
  completion_ok = completion_ok && o.completion_ok;
  coverage_faults.insert(coverage_faults.end(), o.coverage_faults.begin(), o.coverage_faults.end());
  ordering_violations.insert(ordering_violations.end(), o.ordering_violations.begin(),
                             o.ordering_violations.end());
  contention_violations.insert(contention_violations.end(), o.contention_violations.begin(),
                               o.contention_violations.end());
  return *this;
}

IntegrityReport check_coverage(Bytes total, std::vector<std::pair<Bytes, Bytes>> ranges) {
  IntegrityReport r;
  std::sort(ranges.begin(), ranges.end());
  auto fault = [&](Bytes from, Bytes to, std::uint32_t writes) {
    if (to <= from) return;
    r.coverage_ok = false;
    r.coverage_faults.push_back({from, to - from, writes});
  };
  Bytes cursor = 0;  // everything below cursor has been written at least once
  for (auto [offset, length] : ranges) {
    Bytes end = offset + length;
    if (length == 0) continue;
    if (offset > cursor) {
      fault(cursor, std::min(offset, total), 0);
    } else if (offset < cursor) {
      fault(offset, std::min(cursor, end), 2);
    }
    if (end > total) fault(std::max(offset, total), end, 1);
    cursor = std::max(cursor, end);
  }
  if (cursor < total) fault(cursor, total, 0);
  return r;
}

IntegrityReport check_coverage(const ChunkPlan& plan) {
  std::vector<std::pair<Bytes, Bytes>> ranges;
  ranges.reserve(plan.chunks.size());
  for (const auto& c : plan.chunks) ranges.emplace_back(c.dst_offset, c.length);
  return check_coverage(plan.total_size, std::move(ranges));
}

std::vector<ContentionViolation> check_contention(const Timeline& t) {
  std::vector<ContentionViolation> out;
  for (const auto& [ch, intervals] : t.channel_busy) {
    auto sorted = intervals;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.start < b.start || (a.start == b.start && a.task < b.task); });
    // Track the interval reaching furthest so nested overlaps are caught.
    std::size_t reach = 0;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i].start < sorted[reach].end) {
        out.push_back({ch, sorted[reach].task, sorted[i].task});
      }
      if (sorted[i].end > sorted[reach].end) reach = i;
    }
  }
  return out;
}

IntegrityReport check_timeline(const ExecGraph& g, const Timeline& t) {
  if (t.tasks.size() != g.nodes.size()) {
    throw ConfigError(fmt::format("timeline has {} tasks but the graph has {} nodes", t.tasks.size(),
                                  g.nodes.size()));
  }
  std::vector<const SimTask*> by_node(g.nodes.size(), nullptr);
  for (const auto& task : t.tasks) {
    const auto id = task.node.id;
    if (id >= g.nodes.size() || by_node[id]) {
      throw ConfigError(fmt::format("timeline task id {} does not match the graph", id));
    }
    const auto& n = g.nodes[id];
    if (n.role != task.node.role || n.offset != task.node.offset || n.length != task.node.length) {
      throw ConfigError(fmt::format("timeline task {} disagrees with graph node {}", id, id));
    }
    by_node[id] = &task;
  }

  std::vector<std::pair<Bytes, Bytes>> delivered;
  for (const auto& n : g.nodes) {
    if (n.role != NodeRole::stage_hop1) delivered.emplace_back(n.offset, n.length);
  }
  IntegrityReport r = check_coverage(g.total_size, std::move(delivered));

  std::vector<int> incoming(g.nodes.size(), 0);
  for (auto [from, to] : g.edges) {
    if (from >= g.nodes.size() || to >= g.nodes.size()) {
      throw ConfigError(fmt::format("edge {}->{} refers to a missing node", from, to));
    }
    ++incoming[to];
    const auto& a = *by_node[from];
    const auto& b = *by_node[to];
    if (b.start_time < a.end_time) {
      r.ordering_violations.push_back(
          {g.nodes[to].chunk, fmt::format("node {} starts at {} before node {} ends at {}", to,
                                          b.start_time, from, a.end_time)});
    }
  }
  for (const auto& n : g.nodes) {
    if (n.role == NodeRole::stage_hop2 && incoming[n.id] != 1) {
      r.ordering_violations.push_back(
          {n.chunk, fmt::format("second hop node {} has {} incoming dependencies", n.id, incoming[n.id])});
    }
  }

  r.contention_violations = check_contention(t);

  for (const auto& task : t.tasks) {
    if (task.end_time > t.finish) r.completion_ok = false;
  }
  return r;
}

IntegrityReport check_timeline(const ChunkPlan& plan, const Timeline& t) {
  return check_timeline(build_graph(plan), t);
}

IntegrityReport check_concurrent(const std::vector<const ExecGraph*>& graphs,
                                 const std::vector<Timeline>& timelines) {
  if (graphs.size() != timelines.size()) {
    throw ConfigError("check_concurrent: graph and timeline counts differ");
  }
  IntegrityReport r;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    auto one = check_timeline(*graphs[i], timelines[i]);
    one.contention_violations.clear();  // re-checked on the merged view below
    r += one;
  }
  r.contention_violations = check_contention(merge_timelines(timelines));
  return r;
}

std::string summarize(const IntegrityReport& r) {
  if (r.all_clear()) return "all clear";
  return fmt::format("coverage {} ({} faults), {} ordering violations, {} contention violations, completion {}",
                     r.coverage_ok ? "ok" : "FAILED", r.coverage_faults.size(),
                     r.ordering_violations.size(), r.contention_violations.size(),
                     r.completion_ok ? "ok" : "FAILED");
}

}  // namespace mpath
