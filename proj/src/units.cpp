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

#include "mpath/units.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include <fmt/format.h>

#include "mpath/error.hpp"

namespace mpath {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::uint64_t parse_scaled(std::string_view text, bool allow_suffix) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr == first) {
    throw ConfigError(fmt::format("invalid size '{}'", text));
  }
  std::string suffix(ptr, last);
  std::transform(suffix.begin(), suffix.end(), suffix.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (suffix.size() == 2 && suffix[1] == 'B') suffix.pop_back();
  if (suffix == "B") suffix.clear();
  std::uint64_t scale = 1;
  if (suffix.empty()) {
    scale = 1;
  } else if (!allow_suffix) {
    throw ConfigError(fmt::format("invalid count '{}'", text));
  } else if (suffix == "K") {
    scale = KiB;
  } else if (suffix == "M") {
    scale = MiB;
  } else if (suffix == "G") {
    scale = GiB;
  } else {
    throw ConfigError(fmt::format("invalid size suffix in '{}'", text));
  }
  return value * scale;
}

std::vector<std::uint64_t> parse_list(std::string_view text, bool allow_suffix) {
  std::vector<std::uint64_t> out;
  text = trim(text);
  if (text.empty()) throw ConfigError("empty list");
  if (auto dots = text.find(".."); dots != std::string_view::npos) {
    std::uint64_t lo = parse_scaled(text.substr(0, dots), allow_suffix);
    std::uint64_t hi = parse_scaled(text.substr(dots + 2), allow_suffix);
    if (lo == 0 || hi < lo) throw ConfigError(fmt::format("invalid range '{}'", text));
    for (std::uint64_t v = lo; v < hi; v *= 2) out.push_back(v);
    out.push_back(hi);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    out.push_back(parse_scaled(text.substr(pos, comma - pos), allow_suffix));
    pos = comma + 1;
  }
  return out;
}

}  // namespace

Bytes parse_size(std::string_view text) { return parse_scaled(text, true); }

std::vector<Bytes> parse_size_list(std::string_view text) { return parse_list(text, true); }

std::vector<std::uint64_t> parse_count_list(std::string_view text) {
  return parse_list(text, false);
}

std::string format_size(Bytes size) {
  if (size != 0 && size % GiB == 0) return fmt::format("{}G", size / GiB);
  if (size != 0 && size % MiB == 0) return fmt::format("{}M", size / MiB);
  if (size != 0 && size % KiB == 0) return fmt::format("{}K", size / KiB);
  return fmt::format("{}", size);
}

}  // namespace mpath
