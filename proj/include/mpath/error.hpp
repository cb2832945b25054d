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

#include <stdexcept>
#include <string>

namespace mpath {

// Every failure surfaced by the library derives from Error so callers (the
// CLI in particular) can turn it into a one-line diagnostic.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invariant-violating input: topology files, tuning tables,
// graph dumps, CLI values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A transfer cannot be planned on the given topology/configuration.
class PlanError : public Error {
 public:
  using Error::Error;
};

// The simulator was handed something it cannot execute.
class SimError : public Error {
 public:
  using Error::Error;
};

}  // namespace mpath
