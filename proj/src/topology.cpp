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

#include "mpath/topology.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "mpath/error.hpp"

namespace mpath {

std::string device_label(DeviceId id) {
  return id.is_host() ? std::string("host") : std::to_string(id.index);
}

DeviceId parse_device_label(std::string_view label) {
  if (label == "host" || label == "H") return DeviceId::host();
  std::uint32_t index = 0;
  auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), index);
  if (ec != std::errc{} || ptr != label.data() + label.size() || label.empty()) {
    throw ConfigError(fmt::format("invalid device '{}'", label));
  }
  return DeviceId::accelerator(index);
}

bool operator==(const LinkSpec& x, const LinkSpec& y) {
  return x.a == y.a && x.b == y.b && x.bandwidth == y.bandwidth && x.latency == y.latency &&
         x.duplex == y.duplex && x.sublinks == y.sublinks;
}

bool operator==(const ChannelInfo& x, const ChannelInfo& y) {
  return x.id == y.id && x.link == y.link && x.from == y.from && x.to == y.to &&
         x.bandwidth == y.bandwidth && x.latency == y.latency && x.duplex == y.duplex &&
         x.name == y.name;
}

bool Topology::operator==(const Topology& o) const {
  return name_ == o.name_ && devices_ == o.devices_ && links_ == o.links_ &&
         channels_ == o.channels_ && accelerators_ == o.accelerators_;
}

Topology Topology::build(std::string name, std::vector<DeviceId> devices,
                         std::vector<LinkSpec> links) {
  Topology t;
  t.name_ = std::move(name);

  std::set<std::uint32_t> accel;
  int hosts = 0;
  for (const auto& d : devices) {
    if (d.is_host()) {
      ++hosts;
    } else if (!accel.insert(d.index).second) {
      throw ConfigError(fmt::format("duplicate accelerator index {}", d.index));
    }
  }
  if (hosts != 1) {
    throw ConfigError(fmt::format("topology needs exactly one host device, found {}", hosts));
  }
  std::uint32_t expect = 0;
  for (auto i : accel) {
    if (i != expect) {
      throw ConfigError(fmt::format("accelerator indices must be dense from 0; missing {}", expect));
    }
    ++expect;
  }
  t.accelerators_ = static_cast<std::uint32_t>(accel.size());

  // Canonical device order: accelerators ascending, then the host.
  for (std::uint32_t i = 0; i < t.accelerators_; ++i) t.devices_.push_back(DeviceId::accelerator(i));
  t.devices_.push_back(DeviceId::host());

  std::set<std::pair<DeviceId, DeviceId>> seen;
  for (std::size_t i = 0; i < links.size(); ++i) {
    const auto& l = links[i];
    auto where = fmt::format("link {} ({}-{})", i, device_label(l.a), device_label(l.b));
    for (auto d : {l.a, l.b}) {
      if (!d.is_host() && d.index >= t.accelerators_) {
        throw ConfigError(fmt::format("{}: unknown device {}", where, device_label(d)));
      }
    }
    if (l.a == l.b) throw ConfigError(fmt::format("{}: self link", where));
    if (l.a.is_host() && l.b.is_host()) throw ConfigError(fmt::format("{}: host to host", where));
    if (!(l.bandwidth > 0)) throw ConfigError(fmt::format("{}: bandwidth must be > 0", where));
    if (!(l.latency >= 0)) throw ConfigError(fmt::format("{}: latency must be >= 0", where));
    if (l.sublinks == 0) throw ConfigError(fmt::format("{}: sublinks must be >= 1", where));
    auto key = std::minmax(l.a, l.b);
    if (!seen.insert({key.first, key.second}).second) {
      throw ConfigError(fmt::format("{}: duplicate link for this device pair", where));
    }
  }
  t.links_ = std::move(links);

  for (std::size_t i = 0; i < t.links_.size(); ++i) {
    const auto& l = t.links_[i];
    auto add = [&](DeviceId from, DeviceId to, std::string label) {
      ChannelInfo c;
      c.id = ChannelId{static_cast<std::uint32_t>(t.channels_.size())};
      c.link = i;
      c.from = from;
      c.to = to;
      c.bandwidth = l.bandwidth;
      c.latency = l.latency;
      c.duplex = l.duplex;
      c.name = std::move(label);
      t.channels_.push_back(std::move(c));
    };
    if (l.duplex == Duplex::full) {
      add(l.a, l.b, device_label(l.a) + "->" + device_label(l.b));
      add(l.b, l.a, device_label(l.b) + "->" + device_label(l.a));
    } else {
      add(l.a, l.b, device_label(l.a) + "<->" + device_label(l.b));
    }
  }
  return t;
}

const ChannelInfo& Topology::channel(ChannelId id) const {
  if (id.value >= channels_.size()) throw SimError(fmt::format("unknown channel {}", id.value));
  return channels_[id.value];
}

std::optional<std::size_t> Topology::find_link(DeviceId a, DeviceId b) const {
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const auto& l = links_[i];
    if ((l.a == a && l.b == b) || (l.a == b && l.b == a)) return i;
  }
  return std::nullopt;
}

std::optional<ChannelId> Topology::find_channel(DeviceId src, DeviceId dst) const {
  auto link = find_link(src, dst);
  if (!link) return std::nullopt;
  for (const auto& c : channels_) {
    if (c.link != *link) continue;
    if (c.duplex == Duplex::half || c.from == src) return c.id;
  }
  return std::nullopt;
}

ChannelId Topology::channel_for(DeviceId src, DeviceId dst) const {
  auto c = find_channel(src, dst);
  if (!c) {
    throw PlanError(fmt::format("no link between {} and {} in topology '{}'", device_label(src),
                                device_label(dst), name_));
  }
  return *c;
}

std::optional<ChannelId> Topology::find_channel_by_name(std::string_view name) const {
  for (const auto& c : channels_) {
    if (c.name == name) return c.id;
  }
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Record {
  std::string section;
  int line = 0;
  std::map<std::string, std::pair<std::string, int>> fields;

  std::string where() const { return fmt::format("[{}] at line {}", section, line); }

  const std::string* get(const std::string& key) const {
    auto it = fields.find(key);
    return it == fields.end() ? nullptr : &it->second.first;
  }

  const std::string& require(const std::string& key) const {
    const auto* v = get(key);
    if (!v) throw ConfigError(fmt::format("{}: missing field '{}'", where(), key));
    return *v;
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    const auto* v = get(key);
    if (!v) {
      if (fallback) return *fallback;
      require(key);
    }
    double out = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || ptr != v->data() + v->size()) {
      throw ConfigError(fmt::format("{}: field '{}' is not a number: '{}'", where(), key, *v));
    }
    return out;
  }

  std::uint32_t integer(const std::string& key, std::optional<std::uint32_t> fallback = std::nullopt) const {
    const auto* v = get(key);
    if (!v) {
      if (fallback) return *fallback;
      require(key);
    }
    std::uint32_t out = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || ptr != v->data() + v->size()) {
      throw ConfigError(
          fmt::format("{}: field '{}' is not a non-negative integer: '{}'", where(), key, *v));
    }
    return out;
  }

  Duplex duplex(Duplex fallback) const {
    const auto* v = get("duplex");
    if (!v) return fallback;
    if (*v == "full") return Duplex::full;
    if (*v == "half") return Duplex::half;
    throw ConfigError(fmt::format("{}: duplex must be 'full' or 'half', got '{}'", where(), *v));
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    for (const auto& [k, v] : fields) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
        throw ConfigError(fmt::format("{}: unknown field '{}' (line {})", where(), k, v.second));
      }
    }
  }
};

}  // namespace

Topology load_topology(std::string_view source) {
  std::string name = "unnamed";
  std::vector<Record> records;
  std::istringstream in{std::string(source)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(fmt::format("line {}: unterminated section", lineno));
      Record r;
      r.section = std::string(trim(line.substr(1, line.size() - 2)));
      r.line = lineno;
      if (r.section != "device" && r.section != "link" && r.section != "hostlink") {
        throw ConfigError(fmt::format("line {}: unknown section [{}]", lineno, r.section));
      }
      records.push_back(std::move(r));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value'", lineno));
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(fmt::format("line {}: empty key", lineno));
    if (records.empty()) {
      if (key != "name") throw ConfigError(fmt::format("line {}: unknown top-level key '{}'", lineno, key));
      name = value;
      continue;
    }
    auto& fields = records.back().fields;
    if (fields.count(key)) {
      throw ConfigError(fmt::format("{}: field '{}' repeated at line {}", records.back().where(), key, lineno));
    }
    fields.emplace(std::move(key), std::make_pair(std::move(value), lineno));
  }

  std::vector<DeviceId> devices;
  std::vector<LinkSpec> links;
  for (const auto& r : records) {
    if (r.section == "device") {
      r.allow_only({"index", "kind"});
      const auto& kind = r.require("kind");
      if (kind == "host") {
        devices.push_back(DeviceId::host());
      } else if (kind == "accelerator" || kind == "gpu") {
        devices.push_back(DeviceId::accelerator(r.integer("index")));
      } else {
        throw ConfigError(fmt::format("{}: unknown device kind '{}'", r.where(), kind));
      }
    } else if (r.section == "link") {
      r.allow_only({"a", "b", "bandwidth", "latency", "duplex", "sublinks"});
      LinkSpec l;
      l.a = DeviceId::accelerator(r.integer("a"));
      l.b = DeviceId::accelerator(r.integer("b"));
      l.sublinks = r.integer("sublinks", 1u);
      l.bandwidth = r.number("bandwidth") * l.sublinks;
      l.latency = r.number("latency");
      l.duplex = r.duplex(Duplex::full);
      if (!(r.number("bandwidth") > 0)) {
        throw ConfigError(fmt::format("{}: bandwidth must be > 0", r.where()));
      }
      links.push_back(l);
    } else {
      r.allow_only({"device", "bandwidth", "latency", "duplex", "sublinks"});
      LinkSpec l;
      l.a = DeviceId::accelerator(r.integer("device"));
      l.b = DeviceId::host();
      l.sublinks = r.integer("sublinks", 1u);
      l.bandwidth = r.number("bandwidth") * l.sublinks;
      l.latency = r.number("latency");
      l.duplex = r.duplex(Duplex::half);
      if (!(r.number("bandwidth") > 0)) {
        throw ConfigError(fmt::format("{}: bandwidth must be > 0", r.where()));
      }
      links.push_back(l);
    }
  }
  return Topology::build(std::move(name), std::move(devices), std::move(links));
}

Topology load_topology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read topology file '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return load_topology(ss.str());
}

Topology resolve_topology(std::string_view preset_or_path) {
  if (auto text = preset_text(preset_or_path)) return load_topology(*text);
  return load_topology_file(std::string(preset_or_path));
}

std::string describe(const Topology& t) {
  std::size_t host_links = 0;
  for (const auto& l : t.links()) host_links += l.is_host_link() ? 1 : 0;
  return fmt::format("{}: {} accelerators, {} links, {} host links, {} channels", t.name(),
                     t.accelerator_count(), t.links().size() - host_links, host_links,
                     t.channels().size());
}

}  // namespace mpath
