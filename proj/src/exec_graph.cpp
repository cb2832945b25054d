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

#include "mpath/exec_graph.hpp"

#include <bit>
#include <charconv>
#include <queue>
#include <sstream>

#include <fmt/format.h>

#include "mpath/error.hpp"

namespace mpath {

std::string to_string(NodeRole role) {
  switch (role) {
    case NodeRole::direct: return "direct";
    case NodeRole::stage_hop1: return "stage_hop1";
    case NodeRole::stage_hop2: return "stage_hop2";
  }
  return "unknown";
}

NodeRole parse_node_role(std::string_view text) {
  if (text == "direct") return NodeRole::direct;
  if (text == "stage_hop1") return NodeRole::stage_hop1;
  if (text == "stage_hop2") return NodeRole::stage_hop2;
  throw ConfigError(fmt::format("unknown node role '{}'", text));
}

namespace {

// FNV-1a, 64 bit.
class Digest {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ull;
    }
  }
  void u64(std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(buf, 8);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ull;
};

void mix_device(Digest& d, DeviceId id) {
  d.u64(static_cast<std::uint64_t>(id.kind));
  d.u64(id.index);
}

}  // namespace

std::size_t GraphKeyHash::operator()(const GraphKey& k) const {
  Digest d;
  d.u64(k.src_buffer_id);
  d.u64(k.dst_buffer_id);
  d.u64(k.size);
  d.u64(k.config_digest);
  return static_cast<std::size_t>(d.value());
}

std::uint64_t config_digest(const PathConfig& c, const PathSet& ps) {
  Digest d;
  // graph_mode and cache_capacity do not change the graph's shape.
  d.u64(c.num_gpu_paths);
  d.u64(c.host_path_enabled ? 1 : 0);
  d.u64(c.max_chunks);
  d.u64(static_cast<std::uint64_t>(c.share_policy));
  mix_device(d, ps.src);
  mix_device(d, ps.dst);
  d.u64(ps.paths.size());
  for (const auto& p : ps.paths) {
    d.u64(static_cast<std::uint64_t>(p.kind.variant));
    mix_device(d, p.kind.stage);
    d.f64(p.share);
    for (const auto& h : p.hops) d.u64(h.channel.value);
  }
  return d.value();
}

GraphKey graph_key(std::uint64_t src_buffer, std::uint64_t dst_buffer, Bytes size,
                   const PathConfig& config, const PathSet& path_set) {
  return {src_buffer, dst_buffer, size, config_digest(config, path_set)};
}

ExecGraph build_graph(const ChunkPlan& plan) {
  ExecGraph g;
  g.total_size = plan.total_size;

  std::vector<std::uint32_t> first_lane(plan.path_set.paths.size());
  std::uint32_t lanes = 0;
  for (std::size_t p = 0; p < plan.path_set.paths.size(); ++p) {
    first_lane[p] = lanes;
    lanes += plan.path_set.paths[p].kind.staged() ? 2 : 1;
  }
  g.lane_count = lanes;

  for (std::size_t i = 0; i < plan.chunks.size(); ++i) {
    const auto& c = plan.chunks[i];
    const auto& path = plan.path_set.paths.at(c.path_index);
    auto add = [&](const Hop& hop, NodeRole role, std::uint32_t lane) {
      CopyNode n;
      n.id = static_cast<std::uint32_t>(g.nodes.size());
      n.src_dev = hop.from;
      n.dst_dev = hop.to;
      n.channel = hop.channel;
      n.offset = c.src_offset;
      n.length = c.length;
      n.lane = lane;
      n.role = role;
      n.path = static_cast<std::uint32_t>(c.path_index);
      n.chunk = static_cast<std::uint32_t>(i);
      g.nodes.push_back(n);
      return n.id;
    };
    if (!path.kind.staged()) {
      add(path.hops.at(0), NodeRole::direct, first_lane[c.path_index]);
    } else {
      auto h1 = add(path.hops.at(0), NodeRole::stage_hop1, first_lane[c.path_index]);
      auto h2 = add(path.hops.at(1), NodeRole::stage_hop2, first_lane[c.path_index] + 1);
      g.edges.emplace_back(h1, h2);
    }
  }
  return g;
}

std::size_t expected_node_count(const ChunkPlan& plan) {
  std::size_t n = 0;
  for (std::size_t p = 0; p < plan.path_set.paths.size(); ++p) {
    n += plan.chunk_count(p) * (plan.path_set.paths[p].kind.staged() ? 2 : 1);
  }
  return n;
}

std::size_t expected_edge_count(const ChunkPlan& plan) {
  std::size_t n = 0;
  for (std::size_t p = 0; p < plan.path_set.paths.size(); ++p) {
    if (plan.path_set.paths[p].kind.staged()) n += plan.chunk_count(p);
  }
  return n;
}

std::vector<std::uint32_t> topological_order(const ExecGraph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<std::vector<std::uint32_t>> out(n);
  std::vector<std::size_t> indegree(n, 0);
  for (auto [from, to] : g.edges) {
    if (from >= n || to >= n) return {};
    out[from].push_back(to);
    ++indegree[to];
  }
  std::queue<std::uint32_t> ready;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<std::uint32_t> order;
  while (!ready.empty()) {
    auto v = ready.front();
    ready.pop();
    order.push_back(v);
    for (auto w : out[v]) {
      if (--indegree[w] == 0) ready.push(w);
    }
  }
  if (order.size() != n) return {};
  return order;
}

bool is_acyclic(const ExecGraph& g) { return g.nodes.empty() || !topological_order(g).empty(); }

std::string dump_graph(const ExecGraph& g) {
  std::string out = fmt::format("# graph size={} lanes={}\n", g.total_size, g.lane_count);
  for (const auto& n : g.nodes) {
    out += fmt::format("node {} {} {}->{} {} {}\n", n.id, to_string(n.role), device_label(n.src_dev),
                       device_label(n.dst_dev), n.offset, n.length);
  }
  for (auto [from, to] : g.edges) out += fmt::format("edge {} {}\n", from, to);
  return out;
}

namespace {

std::uint64_t parse_u64(std::string_view s, int lineno) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(fmt::format("graph dump line {}: bad integer '{}'", lineno, s));
  }
  return v;
}

}  // namespace

ExecGraph parse_graph_dump(std::string_view text) {
  ExecGraph g;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool have_size = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "#") {
      std::string word;
      while (ls >> word) {
        if (word.rfind("size=", 0) == 0) {
          g.total_size = parse_u64(std::string_view(word).substr(5), lineno);
          have_size = true;
        } else if (word.rfind("lanes=", 0) == 0) {
          g.lane_count = static_cast<std::uint32_t>(parse_u64(std::string_view(word).substr(6), lineno));
        }
      }
      continue;
    }
    if (tag == "node") {
      std::string id, role, route, offset, length;
      if (!(ls >> id >> role >> route >> offset >> length)) {
        throw ConfigError(fmt::format("graph dump line {}: malformed node", lineno));
      }
      auto arrow = route.find("->");
      if (arrow == std::string::npos) {
        throw ConfigError(fmt::format("graph dump line {}: malformed route '{}'", lineno, route));
      }
      CopyNode n;
      n.id = static_cast<std::uint32_t>(parse_u64(id, lineno));
      if (n.id != g.nodes.size()) {
        throw ConfigError(fmt::format("graph dump line {}: node ids must be dense and ordered", lineno));
      }
      n.role = parse_node_role(role);
      n.src_dev = parse_device_label(route.substr(0, arrow));
      n.dst_dev = parse_device_label(route.substr(arrow + 2));
      n.offset = parse_u64(offset, lineno);
      n.length = parse_u64(length, lineno);
      g.nodes.push_back(n);
    } else if (tag == "edge") {
      std::string from, to;
      if (!(ls >> from >> to)) throw ConfigError(fmt::format("graph dump line {}: malformed edge", lineno));
      g.edges.emplace_back(static_cast<std::uint32_t>(parse_u64(from, lineno)),
                           static_cast<std::uint32_t>(parse_u64(to, lineno)));
    } else {
      throw ConfigError(fmt::format("graph dump line {}: unknown record '{}'", lineno, tag));
    }
  }
  if (!have_size) {
    for (const auto& n : g.nodes) g.total_size = std::max(g.total_size, n.offset + n.length);
  }
  return g;
}

}  // namespace mpath
