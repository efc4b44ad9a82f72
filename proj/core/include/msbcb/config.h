// Copyright 2026 The MSBCB Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MSBCB_CONFIG_H_
#define MSBCB_CONFIG_H_

#include <string>
#include <utility>
#include <vector>

#include "msbcb/orchestrator.h"
#include "msbcb/sim_env.h"

namespace msbcb {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Flat `key = value` lines; '#' starts a comment. Throws IoError when the file
// cannot be read and ConfigError on malformed lines.
KeyValues ReadKeyValueFile(const std::string& path);

// Parses "key=value".
std::pair<std::string, std::string> ParseOverride(const std::string& text);

// Environment-only files use bare field names (n_users, T_max, ...).
void ApplyEnvKey(EnvConfig& env, const std::string& key, const std::string& value);
EnvConfig LoadEnvConfig(const std::string& path);

// Experiment files use env.*, agent.*, pid.* and top-level keys. Unknown keys
// are rejected with a ConfigError naming the key.
void ApplyExperimentKey(ExperimentConfig& config, const std::string& key,
                        const std::string& value);

// Defaults, then the file (if `path` is non-empty), then `overrides` in order.
// The result is validated.
ExperimentConfig ParseConfig(const std::string& path,
                             const std::vector<std::string>& overrides = {});

std::vector<std::string> KnownExperimentKeys();

}  // namespace msbcb

#endif  // MSBCB_CONFIG_H_
