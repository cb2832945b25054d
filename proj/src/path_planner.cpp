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

#include "mpath/path_planner.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <set>

#include <fmt/format.h>

#include "mpath/error.hpp"

namespace mpath {

void validate(const PathConfig& c) {
  if (c.num_gpu_paths < 1) throw ConfigError("num_gpu_paths must be >= 1");
  if (c.max_chunks < 1) throw ConfigError("max_chunks must be >= 1");
  if (c.cache_capacity < 1) throw ConfigError("cache_capacity must be >= 1");
}

std::string to_string(SharePolicy policy) {
  return policy == SharePolicy::equal ? "equal" : "bandwidth_proportional";
}

SharePolicy parse_share_policy(std::string_view text) {
  if (text == "equal") return SharePolicy::equal;
  if (text == "bandwidth_proportional" || text == "proportional" || text == "bandwidth") {
    return SharePolicy::bandwidth_proportional;
  }
  throw ConfigError(fmt::format("unknown share policy '{}'", text));
}

bool parse_flag(std::string_view text) {
  if (text == "1" || text == "on" || text == "true" || text == "yes") return true;
  if (text == "0" || text == "off" || text == "false" || text == "no") return false;
  throw ConfigError(fmt::format("expected on/off, got '{}'", text));
}

namespace {

std::uint32_t parse_positive(const std::string& var, const std::string& text) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || v == 0) {
    throw ConfigError(fmt::format("{}: expected a positive integer, got '{}'", var, text));
  }
  return v;
}

}  // namespace

PathConfig config_from_env(const EnvLookup& env, PathConfig c) {
  if (auto v = env("MP_NUM_GPU_PATHS")) c.num_gpu_paths = parse_positive("MP_NUM_GPU_PATHS", *v);
  if (auto v = env("MP_ENABLE_HOST_PATH")) c.host_path_enabled = parse_flag(*v);
  if (auto v = env("MP_MAX_CHUNKS")) c.max_chunks = parse_positive("MP_MAX_CHUNKS", *v);
  if (auto v = env("MP_ENABLE_GRAPH")) c.graph_mode = parse_flag(*v);
  if (auto v = env("MP_GRAPH_CACHE_SIZE")) c.cache_capacity = parse_positive("MP_GRAPH_CACHE_SIZE", *v);
  if (auto v = env("MP_SHARE_POLICY")) c.share_policy = parse_share_policy(*v);
  return c;
}

namespace {

Path make_path(const Topology& t, DeviceId src, DeviceId dst, PathKind kind) {
  Path p;
  p.kind = kind;
  if (!kind.staged()) {
    p.hops.push_back({t.channel_for(src, dst), src, dst});
  } else {
    p.hops.push_back({t.channel_for(src, kind.stage), src, kind.stage});
    p.hops.push_back({t.channel_for(kind.stage, dst), kind.stage, dst});
  }
  return p;
}

double bottleneck(const Topology& t, const Path& p) {
  double bw = std::numeric_limits<double>::infinity();
  for (const auto& h : p.hops) bw = std::min(bw, t.channel(h.channel).bandwidth);
  return bw;
}

void assign_shares(const Topology& t, PathSet& set, SharePolicy policy) {
  std::vector<double> weight;
  for (const auto& p : set.paths) {
    weight.push_back(policy == SharePolicy::equal ? 1.0 : bottleneck(t, p));
  }
  double total = 0;
  for (double w : weight) total += w;
  for (std::size_t i = 0; i < set.paths.size(); ++i) set.paths[i].share = weight[i] / total;
}

void check_endpoints(const Topology& t, DeviceId src, DeviceId dst) {
  for (auto d : {src, dst}) {
    if (d.is_host() || d.index >= t.accelerator_count()) {
      throw PlanError(fmt::format("{} is not an accelerator of '{}'", device_label(d), t.name()));
    }
  }
  if (src == dst) throw PlanError(fmt::format("src and dst are both {}", device_label(src)));
  if (!t.has_link(src, dst)) {
    throw PlanError(fmt::format("{} and {} are not directly linked in '{}'", device_label(src),
                                device_label(dst), t.name()));
  }
}

// Accelerators that can stage src->dst, ascending.
std::vector<DeviceId> staging_candidates(const Topology& t, DeviceId src, DeviceId dst) {
  std::vector<DeviceId> out;
  for (std::uint32_t i = 0; i < t.accelerator_count(); ++i) {
    auto d = DeviceId::accelerator(i);
    if (d == src || d == dst) continue;
    if (t.has_link(src, d) && t.has_link(d, dst)) out.push_back(d);
  }
  return out;
}

PathSet assemble(const Topology& t, DeviceId src, DeviceId dst, const std::vector<DeviceId>& stages,
                 const PathConfig& c) {
  PathSet set;
  set.src = src;
  set.dst = dst;
  set.paths.push_back(make_path(t, src, dst, PathKind::direct()));
  for (auto s : stages) set.paths.push_back(make_path(t, src, dst, PathKind::gpu_staged(s)));
  if (c.host_path_enabled) {
    if (!t.has_link(src, DeviceId::host()) || !t.has_link(DeviceId::host(), dst)) {
      throw PlanError(fmt::format("host path {}->host->{} is unreachable in '{}'", device_label(src),
                                  device_label(dst), t.name()));
    }
    set.paths.push_back(make_path(t, src, dst, PathKind::host_staged()));
  }
  assign_shares(t, set, c.share_policy);
  return set;
}

void require_staging(const std::vector<DeviceId>& candidates, DeviceId src, DeviceId dst,
                     const PathConfig& c) {
  if (candidates.size() < c.num_gpu_paths - 1) {
    throw PlanError(fmt::format("{} GPU paths requested for {}->{} but only {} staging devices exist",
                                c.num_gpu_paths, device_label(src), device_label(dst),
                                candidates.size()));
  }
}

// All k-subsets of `pool` in lexicographic order.
std::vector<std::vector<DeviceId>> combinations(const std::vector<DeviceId>& pool, std::size_t k) {
  std::vector<std::vector<DeviceId>> out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > pool.size()) return out;
  while (true) {
    std::vector<DeviceId> pick;
    for (auto i : idx) pick.push_back(pool[i]);
    out.push_back(std::move(pick));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == pool.size() - k + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::vector<ChannelId> channels_of(const PathSet& set) {
  std::vector<ChannelId> out;
  for (const auto& p : set.paths) {
    for (const auto& h : p.hops) out.push_back(h.channel);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

PathSet plan_paths(const Topology& t, DeviceId src, DeviceId dst, const PathConfig& c) {
  validate(c);
  check_endpoints(t, src, dst);
  auto candidates = staging_candidates(t, src, dst);
  require_staging(candidates, src, dst, c);
  candidates.resize(c.num_gpu_paths - 1);
  return assemble(t, src, dst, candidates, c);
}

std::size_t count_shared_channels(const std::vector<PathSet>& sets) {
  std::map<ChannelId, int> users;
  for (const auto& s : sets) {
    for (auto ch : channels_of(s)) ++users[ch];
  }
  std::size_t shared = 0;
  for (const auto& [ch, n] : users) shared += n > 1 ? 1 : 0;
  return shared;
}

ContentionPlan plan_contention_free(const Topology& t,
                                    const std::vector<std::pair<DeviceId, DeviceId>>& transfers,
                                    const PathConfig& c) {
  validate(c);
  if (transfers.empty()) throw PlanError("plan_contention_free: empty transfer list");

  // Every option for every transfer, already materialized.
  std::vector<std::vector<PathSet>> options;
  std::vector<std::vector<std::vector<ChannelId>>> option_channels;
  for (const auto& [src, dst] : transfers) {
    check_endpoints(t, src, dst);
    auto candidates = staging_candidates(t, src, dst);
    require_staging(candidates, src, dst, c);
    auto& opts = options.emplace_back();
    auto& chans = option_channels.emplace_back();
    for (const auto& stages : combinations(candidates, c.num_gpu_paths - 1)) {
      opts.push_back(assemble(t, src, dst, stages, c));
      chans.push_back(channels_of(opts.back()));
    }
  }

  // Depth-first branch and bound on the shared-channel count, which can
  // only grow as transfers are added.
  const std::size_t n = transfers.size();
  std::vector<int> users(t.channels().size(), 0);
  std::vector<std::size_t> choice(n, 0);
  std::vector<std::size_t> best_choice;
  std::size_t best = std::numeric_limits<std::size_t>::max();

  auto search = [&](auto&& self, std::size_t depth, std::size_t shared) -> void {
    if (shared >= best) return;
    if (depth == n) {
      best = shared;
      best_choice = choice;
      return;
    }
    for (std::size_t o = 0; o < options[depth].size() && best > 0; ++o) {
      std::size_t added = 0;
      for (auto ch : option_channels[depth][o]) {
        if (users[ch.value]++ == 1) ++added;
      }
      choice[depth] = o;
      self(self, depth + 1, shared + added);
      for (auto ch : option_channels[depth][o]) --users[ch.value];
    }
  };
  search(search, 0, 0);

  ContentionPlan plan;
  for (std::size_t i = 0; i < n; ++i) plan.path_sets.push_back(options[i][best_choice[i]]);
  plan.shared_channels = best;
  plan.contended = best > 0;
  return plan;
}

}  // namespace mpath
