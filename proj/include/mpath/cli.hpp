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

#include <iosfwd>
#include <string>
#include <vector>

#include "mpath/path_planner.hpp"

namespace mpath {

// Runs one command line. args excludes the program name. Returns the exit
// code; diagnostics go to `err` as one line.
int run_cli(const std::vector<std::string>& args, const EnvLookup& env, std::ostream& out,
            std::ostream& err);

// EnvLookup over the process environment.
EnvLookup process_env();

}  // namespace mpath
