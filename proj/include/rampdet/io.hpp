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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

#include "rampdet/harness.hpp"

namespace rampdet {

inline constexpr std::string_view kCsvHeader =
    "detector,m,n,modulation,ebn0_db,trials,bit_errors,total_bits,ber,avg_iterations,"
    "divergence_failures,wall_time_s,op_count";

/// Comment line with digest and seed, the fixed header, one row per result.
/// wall_time_s is left empty unless `include_timing`.
std::string results_csv(const SimConfig& cfg, std::span<const RunResult> results,
                        bool include_timing);

nlohmann::json to_json(const SimConfig& cfg);
nlohmann::json to_json(const RunResult& r);
nlohmann::json to_json(const ConvergenceTrace& t);
nlohmann::json to_json(const SeComparison& s);
nlohmann::json to_json(const QqExperiment& q);

/// {"config": ..., "config_digest": ..., "seed": ..., "records": records}
nlohmann::json sidecar(const SimConfig& cfg, nlohmann::json records);

/// Paired quantile table: theoretical,state_dependent,genie.
std::string qq_csv(const SimConfig& cfg, const QqExperiment& q);

void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace rampdet
