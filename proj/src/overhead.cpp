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

#include "mpath/overhead.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "mpath/error.hpp"

namespace mpath {

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::creation: return "creation";
    case Phase::construction: return "construction";
    case Phase::instantiation: return "instantiation";
    case Phase::launch: return "launch";
  }
  return "unknown";
}

Phase parse_phase(std::string_view text) {
  for (auto p : kAllPhases) {
    if (to_string(p) == text) return p;
  }
  throw ConfigError(fmt::format("unknown lifecycle phase '{}'", text));
}

const AffineCost& OverheadModel::phase(Phase p) const {
  switch (p) {
    case Phase::creation: return creation;
    case Phase::construction: return construction;
    case Phase::instantiation: return instantiation;
    case Phase::launch: return launch;
  }
  throw ConfigError("unknown lifecycle phase");
}

AffineCost& OverheadModel::phase(Phase p) {
  return const_cast<AffineCost&>(std::as_const(*this).phase(p));
}

void validate(const OverheadModel& m) {
  for (auto p : kAllPhases) {
    const auto& c = m.phase(p);
    if (c.fixed < 0 || c.per_node < 0) {
      throw ConfigError(fmt::format("{} coefficients must be >= 0", to_string(p)));
    }
  }
  if (m.submit_cost < 0) throw ConfigError("submit_cost must be >= 0");
  if (m.event_cost < 0) throw ConfigError("event_cost must be >= 0");
}

Seconds lifecycle_cost(const OverheadModel& model, std::uint64_t nodes, bool first_time, Phase phase) {
  if (nodes < 1) throw ConfigError("lifecycle_cost needs at least one node");
  if (!first_time && phase != Phase::launch) return 0;
  return model.phase(phase).at(nodes);
}

Seconds PhaseCosts::get(Phase p) const {
  switch (p) {
    case Phase::creation: return creation;
    case Phase::construction: return construction;
    case Phase::instantiation: return instantiation;
    case Phase::launch: return launch;
  }
  return 0;
}

PhaseCosts& PhaseCosts::operator+=(const PhaseCosts& o) {
  creation += o.creation;
  construction += o.construction;
  instantiation += o.instantiation;
  launch += o.launch;
  submit += o.submit;
  event += o.event;
  return *this;
}

PhaseCosts graph_host_costs(const OverheadModel& m, std::uint64_t nodes, bool first_time) {
  PhaseCosts c;
  c.creation = lifecycle_cost(m, nodes, first_time, Phase::creation);
  c.construction = lifecycle_cost(m, nodes, first_time, Phase::construction);
  c.instantiation = lifecycle_cost(m, nodes, first_time, Phase::instantiation);
  c.launch = lifecycle_cost(m, nodes, first_time, Phase::launch);
  return c;
}

OverheadModel load_overhead_model(std::string_view text) {
  OverheadModel m;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    auto eq = raw.find('=');
    auto strip = [](std::string s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
      std::size_t i = 0;
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      return s.substr(i);
    };
    if (strip(raw).empty()) continue;
    if (eq == std::string::npos) throw ConfigError(fmt::format("overhead model line {}: expected 'key = value'", lineno));
    std::string key = strip(raw.substr(0, eq));
    std::string value = strip(raw.substr(eq + 1));
    double v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
      throw ConfigError(fmt::format("overhead model line {}: '{}' is not a number", lineno, value));
    }
    if (key == "submit_cost") {
      m.submit_cost = v;
    } else if (key == "event_cost") {
      m.event_cost = v;
    } else if (auto dot = key.find('.'); dot != std::string::npos) {
      auto& c = m.phase(parse_phase(key.substr(0, dot)));
      auto field = key.substr(dot + 1);
      if (field == "fixed") {
        c.fixed = v;
      } else if (field == "per_node") {
        c.per_node = v;
      } else {
        throw ConfigError(fmt::format("overhead model line {}: unknown field '{}'", lineno, key));
      }
    } else {
      throw ConfigError(fmt::format("overhead model line {}: unknown key '{}'", lineno, key));
    }
  }
  validate(m);
  return m;
}

OverheadModel load_overhead_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read overhead model '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return load_overhead_model(ss.str());
}

}  // namespace mpath
