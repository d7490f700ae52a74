// Copyright 2026 The rampdet Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "rampdet/system.hpp"

namespace rampdet {

// Flat "key = value" text; '#' starts a comment. Keys are the SimConfig
// field names; lists are comma separated.

SimConfig parse_config(std::string_view text, std::string_view origin = "<config>");
/// Throws ConfigError naming the path when it cannot be read.
SimConfig load_config(const std::filesystem::path& path);

void set_field(SimConfig& cfg, std::string_view key, std::string_view value);
/// "key=value"
void apply_override(SimConfig& cfg, std::string_view assignment);

/// Sorted key = value lines with round-trip number formatting.
std::string canonical_text(const SimConfig& cfg);
std::uint64_t config_digest(const SimConfig& cfg);
std::string digest_hex(std::uint64_t digest);

}  // namespace rampdet
