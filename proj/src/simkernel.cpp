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

#include "mpath/simkernel.hpp"

#include <algorithm>
#include <charconv>
#include <queue>
#include <sstream>
#include <tuple>

#include <fmt/format.h>

#include "mpath/error.hpp"

namespace mpath {

std::string to_string(ExecMode mode) { return mode == ExecMode::graph ? "graph" : "streamed"; }

SimReport make_report(const Timeline& t) {
  SimReport r;
  r.makespan = t.makespan;
  r.bandwidth = t.makespan > 0 ? static_cast<double>(t.bytes_moved) / t.makespan : 0;
  r.overhead = t.overhead;
  r.contention_queue_time = t.contention_queue_time;
  return r;
}

PhaseCosts host_costs(const OverheadModel& model, const ExecGraph& graph, ExecMode mode,
                      bool first_time) {
  const auto n = static_cast<std::uint64_t>(graph.nodes.size());
  if (mode == ExecMode::graph) return graph_host_costs(model, std::max<std::uint64_t>(n, 1), first_time);
  PhaseCosts c;
  c.submit = model.submit_cost * static_cast<double>(n);
  c.event = model.event_cost * static_cast<double>(graph.edges.size());
  return c;
}

namespace {

struct GlobalTask {
  std::uint32_t job = 0;
  std::uint32_t node = 0;
  std::uint32_t pending = 0;
  Seconds ready = 0;
  std::vector<std::uint32_t> successors;
};

enum class EventKind { finish = 0, ready = 1 };

struct Event {
  Seconds time;
  EventKind kind;
  std::uint64_t seq;
  std::uint32_t task;

  bool operator>(const Event& o) const {
    return std::tie(time, kind, seq) > std::tie(o.time, o.kind, o.seq);
  }
};

struct Queued {
  Seconds ready;
  std::uint32_t arrival_rank;
  std::uint32_t node;
  std::uint32_t task;

  bool operator>(const Queued& o) const {
    return std::tie(ready, arrival_rank, node, task) > std::tie(o.ready, o.arrival_rank, o.node, o.task);
  }
};

void check_graph(const Topology& topology, const ExecGraph& g) {
  for (const auto& n : g.nodes) {
    if (n.channel.value >= topology.channels().size()) {
      throw SimError(fmt::format("node {} uses channel {} which topology '{}' lacks", n.id,
                                 n.channel.value, topology.name()));
    }
    if (n.length == 0) throw SimError(fmt::format("node {} has zero length", n.id));
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (g.nodes[i].id != i) throw SimError(fmt::format("node ids must be dense; slot {} holds {}", i, g.nodes[i].id));
  }
  if (!is_acyclic(g)) throw SimError("execution graph has a cycle");
}

}  // namespace

std::vector<Timeline> simulate_concurrent(const Topology& topology, const std::vector<TransferJob>& jobs,
                                          const OverheadModel& model) {
  if (jobs.empty()) throw SimError("simulate_concurrent: no transfers");
  validate(model);
  for (const auto& j : jobs) {
    if (!j.graph) throw SimError("transfer without a graph");
    check_graph(topology, *j.graph);
  }

  // Arrival order: by arrival time, then submission index.
  std::vector<std::uint32_t> by_arrival(jobs.size());
  for (std::uint32_t i = 0; i < jobs.size(); ++i) by_arrival[i] = i;
  std::stable_sort(by_arrival.begin(), by_arrival.end(),
                   [&](auto a, auto b) { return jobs[a].arrival < jobs[b].arrival; });
  std::vector<std::uint32_t> arrival_rank(jobs.size());
  for (std::uint32_t r = 0; r < by_arrival.size(); ++r) arrival_rank[by_arrival[r]] = r;

  std::vector<Timeline> out(jobs.size());
  std::map<std::uint32_t, Seconds> issuer_free;
  for (auto j : by_arrival) {
    const auto& job = jobs[j];
    auto& tl = out[j];
    tl.start = job.arrival;
    tl.overhead = host_costs(model, *job.graph, job.mode, job.first_time);
    auto [it, fresh] = issuer_free.try_emplace(job.issuer, job.arrival);
    Seconds host_start = std::max(it->second, job.arrival);
    tl.device_ready = host_start + tl.overhead.total();
    it->second = tl.device_ready;
    tl.bytes_moved = job.graph->total_size;
    tl.lanes = job.graph->lane_count;
  }

  // Flatten every node of every job into one task table.
  std::vector<GlobalTask> tasks;
  std::vector<std::uint32_t> base(jobs.size());
  for (std::uint32_t j = 0; j < jobs.size(); ++j) {
    base[j] = static_cast<std::uint32_t>(tasks.size());
    const auto& g = *jobs[j].graph;
    std::map<std::uint32_t, std::uint32_t> last_in_lane;
    for (const auto& n : g.nodes) {
      GlobalTask t;
      t.job = j;
      t.node = n.id;
      t.ready = out[j].device_ready;
      tasks.push_back(std::move(t));
      auto gid = base[j] + n.id;
      if (auto it = last_in_lane.find(n.lane); it != last_in_lane.end()) {
        tasks[it->second].successors.push_back(gid);
        ++tasks[gid].pending;
      }
      last_in_lane[n.lane] = gid;
    }
    for (auto [from, to] : g.edges) {
      tasks[base[j] + from].successors.push_back(base[j] + to);
      ++tasks[base[j] + to].pending;
    }
  }

  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  std::uint64_t seq = 0;
  for (std::uint32_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].pending == 0) events.push({tasks[i].ready, EventKind::ready, seq++, i});
  }

  const auto& channels = topology.channels();
  std::vector<std::priority_queue<Queued, std::vector<Queued>, std::greater<>>> queues(channels.size());
  std::vector<bool> busy(channels.size(), false);
  std::vector<Seconds> start(tasks.size(), 0), end(tasks.size(), 0);
  std::vector<std::uint32_t> touched;
  std::size_t completed = 0;

  auto node_of = [&](std::uint32_t gid) -> const CopyNode& {
    return jobs[tasks[gid].job].graph->nodes[tasks[gid].node];
  };

  while (!events.empty()) {
    const Seconds now = events.top().time;
    touched.clear();
    while (!events.empty() && events.top().time == now) {
      auto ev = events.top();
      events.pop();
      const auto ch = node_of(ev.task).channel.value;
      if (ev.kind == EventKind::finish) {
        busy[ch] = false;
        ++completed;
        for (auto s : tasks[ev.task].successors) {
          auto& succ = tasks[s];
          succ.ready = std::max(succ.ready, now);
          if (--succ.pending == 0) events.push({succ.ready, EventKind::ready, seq++, s});
        }
      } else {
        queues[ch].push({tasks[ev.task].ready, arrival_rank[tasks[ev.task].job], tasks[ev.task].node, ev.task});
      }
      touched.push_back(ch);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (auto ch : touched) {
      if (busy[ch] || queues[ch].empty()) continue;
      auto next = queues[ch].top();
      queues[ch].pop();
      const auto& info = channels[ch];
      const auto& node = node_of(next.task);
      start[next.task] = now;
      end[next.task] = now + info.latency + static_cast<double>(node.length) / info.bandwidth;
      busy[ch] = true;
      events.push({end[next.task], EventKind::finish, seq++, next.task});
    }
  }
  if (completed != tasks.size()) throw SimError("simulation stalled: dependency cycle across lanes");

  for (std::uint32_t j = 0; j < jobs.size(); ++j) {
    auto& tl = out[j];
    const auto& g = *jobs[j].graph;
    Seconds last = tl.device_ready;
    for (const auto& n : g.nodes) {
      auto gid = base[j] + n.id;
      SimTask st;
      st.node = n;
      st.transfer = j;
      st.ready_time = tasks[gid].ready;
      st.start_time = start[gid];
      st.end_time = end[gid];
      tl.contention_queue_time += st.start_time - st.ready_time;
      last = std::max(last, st.end_time);
      tl.channel_busy[n.channel].push_back({st.start_time, st.end_time, n.id});
      tl.tasks.push_back(st);
    }
    for (auto& [ch, iv] : tl.channel_busy) {
      std::sort(iv.begin(), iv.end(), [](const auto& a, const auto& b) {
        return std::tie(a.start, a.task) < std::tie(b.start, b.task);
      });
    }
    const Seconds sync = model.event_cost * tl.lanes;
    tl.overhead.event += sync;
    tl.finish = last + sync;
    tl.makespan = tl.finish - tl.start;
  }
  return out;
}

Timeline simulate_graph(const Topology& topology, const ExecGraph& graph, const OverheadModel& model,
                        bool first_time, Seconds start) {
  TransferJob job;
  job.graph = std::make_shared<const ExecGraph>(graph);
  job.mode = ExecMode::graph;
  job.first_time = first_time;
  job.arrival = start;
  return std::move(simulate_concurrent(topology, {job}, model).front());
}

Timeline simulate_streamed(const Topology& topology, const ChunkPlan& plan, const OverheadModel& model,
                           Seconds start) {
  TransferJob job;
  job.graph = std::make_shared<const ExecGraph>(build_graph(plan));
  job.mode = ExecMode::streamed;
  job.arrival = start;
  return std::move(simulate_concurrent(topology, {job}, model).front());
}

Timeline merge_timelines(const std::vector<Timeline>& timelines) {
  Timeline m;
  if (timelines.empty()) return m;
  m.start = timelines.front().start;
  for (const auto& t : timelines) {
    m.start = std::min(m.start, t.start);
    m.finish = std::max(m.finish, t.finish);
    m.bytes_moved += t.bytes_moved;
    m.lanes += t.lanes;
    m.overhead += t.overhead;
    m.contention_queue_time += t.contention_queue_time;
    for (const auto& task : t.tasks) {
      auto idx = static_cast<std::uint32_t>(m.tasks.size());
      m.tasks.push_back(task);
      m.channel_busy[task.node.channel].push_back({task.start_time, task.end_time, idx});
    }
  }
  for (auto& [ch, iv] : m.channel_busy) {
    std::sort(iv.begin(), iv.end(), [](const auto& a, const auto& b) {
      return std::tie(a.start, a.task) < std::tie(b.start, b.task);
    });
  }
  m.makespan = m.finish - m.start;
  return m;
}

std::string timeline_csv(const Topology& topology, const Timeline& t) {
  std::string out = "task_id,path,role,channel,start,end,offset,length\n";
  for (const auto& task : t.tasks) {
    const auto& n = task.node;
    out += fmt::format("{},{},{},{},{},{},{},{}\n", n.id, n.path, to_string(n.role),
                       topology.channel(n.channel).name, task.start_time, task.end_time, n.offset,
                       n.length);
  }
  out += fmt::format("# makespan,{}\n", t.makespan);
  return out;
}

namespace {

template <class T>
T parse_field(std::string_view s, int lineno, std::string_view what) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(fmt::format("timeline line {}: bad {} '{}'", lineno, what, s));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto next = line.find(sep, pos);
    out.push_back(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

ParsedTimeline parse_timeline_csv(std::string_view text) {
  ParsedTimeline p;
  auto& t = p.timeline;
  std::map<std::string, std::uint32_t, std::less<>> intern;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  bool header = false;
  bool have_makespan = false;
  Seconds last = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string_view line = raw;
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto f = split(line.substr(1), ',');
      if (f.size() == 2 && (f[0] == " makespan" || f[0] == "makespan")) {
        t.makespan = parse_field<double>(f[1], lineno, "makespan");
        have_makespan = true;
      }
      continue;
    }
    if (!header) {
      if (line != "task_id,path,role,channel,start,end,offset,length") {
        throw ConfigError(fmt::format("timeline line {}: unexpected header '{}'", lineno, line));
      }
      header = true;
      continue;
    }
    auto f = split(line, ',');
    if (f.size() != 8) throw ConfigError(fmt::format("timeline line {}: expected 8 fields", lineno));
    SimTask task;
    task.node.id = parse_field<std::uint32_t>(f[0], lineno, "task_id");
    task.node.path = parse_field<std::uint32_t>(f[1], lineno, "path");
    task.node.role = parse_node_role(f[2]);
    auto [it, fresh] = intern.try_emplace(std::string(f[3]), static_cast<std::uint32_t>(p.channel_names.size()));
    if (fresh) p.channel_names.emplace_back(f[3]);
    task.node.channel = ChannelId{it->second};
    task.start_time = parse_field<double>(f[4], lineno, "start");
    task.end_time = parse_field<double>(f[5], lineno, "end");
    task.ready_time = task.start_time;
    task.node.offset = parse_field<std::uint64_t>(f[6], lineno, "offset");
    task.node.length = parse_field<std::uint64_t>(f[7], lineno, "length");
    last = std::max(last, task.end_time);
    auto idx = static_cast<std::uint32_t>(t.tasks.size());
    t.channel_busy[task.node.channel].push_back({task.start_time, task.end_time, idx});
    t.tasks.push_back(task);
  }
  if (!header) throw ConfigError("timeline: missing header");
  for (auto& [ch, iv] : t.channel_busy) {
    std::sort(iv.begin(), iv.end(), [](const auto& a, const auto& b) {
      return std::tie(a.start, a.task) < std::tie(b.start, b.task);
    });
  }
  if (!have_makespan) t.makespan = last;
  t.finish = t.start + t.makespan;
  return p;
}

}  // namespace mpath
