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
#include <string>
#include <string_view>
#include <vector>

namespace mpath {

using Bytes = std::uint64_t;
using Seconds = double;

inline constexpr Bytes KiB = Bytes{1} << 10;
inline constexpr Bytes MiB = Bytes{1} << 20;
inline constexpr Bytes GiB = Bytes{1} << 30;

// "4096", "64K", "8M", "512MB", "1G" -> bytes. Suffixes are binary.
Bytes parse_size(std::string_view text);

// "1M..512M" expands geometrically (x2) from the lower bound and always ends
// at the upper bound; "1M,4M,8M" is taken literally; a single value is a
// one-element list.
std::vector<Bytes> parse_size_list(std::string_view text);

// Same grammar for plain counts ("2..34" -> 2,4,8,16,32,34).
std::vector<std::uint64_t> parse_count_list(std::string_view text);

// Shortest exact label: 1048576 -> "1M", 1536 -> "1536".
std::string format_size(Bytes size);

}  // namespace mpath
