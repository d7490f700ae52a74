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

#include "rampdet/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <fmt/format.h>

namespace rampdet {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(fmt::format("{}: cannot parse '{}'", key, text));
  }
  return value;
}

std::vector<double> parse_real_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_number<double>(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string join_detectors(const std::vector<DetectorId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += to_string(ids[i]);
  }
  return out;
}

}  // namespace

void set_field(SimConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "m") {
    cfg.m = parse_number<int>(key, value);
  } else if (key == "n") {
    cfg.n = parse_number<int>(key, value);
  } else if (key == "modulation") {
    cfg.modulation = parse_modulation(value);
  } else if (key == "ebn0_db_grid") {
    cfg.ebn0_db_grid = parse_real_list(key, value);
  } else if (key == "trials") {
    cfg.trials = parse_number<int>(key, value);
  } else if (key == "alpha") {
    cfg.alpha = parse_number<double>(key, value);
  } else if (key == "lambda_eff") {
    cfg.lambda_eff = parse_number<double>(key, value);
  } else if (key == "t_max") {
    cfg.t_max = parse_number<int>(key, value);
  } else if (key == "epsilon") {
    cfg.epsilon = parse_number<double>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "detectors") {
    cfg.detectors = parse_detector_list(value);
  } else {
    throw ConfigError(fmt::format("unknown config key '{}'", key));
  }
}

void apply_override(SimConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(fmt::format("override '{}' is not of the form key=value", assignment));
  }
  set_field(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

SimConfig parse_config(std::string_view text, std::string_view origin) {
  SimConfig cfg;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("{}:{}: expected key = value", origin, line_no));
    }
    try {
      set_field(cfg, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}:{}: {}", origin, line_no, e.what()));
    }
  }
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string canonical_text(const SimConfig& cfg) {
  std::string grid;
  for (std::size_t i = 0; i < cfg.ebn0_db_grid.size(); ++i) {
    if (i) grid += ',';
    grid += fmt::format("{}", cfg.ebn0_db_grid[i]);
  }
  return fmt::format(
      "m = {}\nn = {}\nmodulation = {}\nebn0_db_grid = {}\ntrials = {}\nalpha = {}\n"
      "lambda_eff = {}\nt_max = {}\nepsilon = {}\nseed = {}\ndetectors = {}\n",
      cfg.m, cfg.n, to_string(cfg.modulation), grid, cfg.trials, cfg.alpha, cfg.lambda_eff,
      cfg.t_max, cfg.epsilon, cfg.seed, join_detectors(cfg.detectors));
}

std::uint64_t config_digest(const SimConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : canonical_text(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest_hex(std::uint64_t digest) { return fmt::format("{:016x}", digest); }

}  // namespace rampdet
