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

#include "rampdet/system.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <string>
#include <utility>

namespace rampdet {

namespace {

constexpr std::array<std::pair<DetectorId, std::string_view>, 8> kDetectorNames{{
    {DetectorId::Zf, "zf"},
    {DetectorId::Lmmse, "lmmse"},
    {DetectorId::StandardAmp, "standard-amp"},
    {DetectorId::Ramp, "ramp"},
    {DetectorId::RobustRamp, "robust-ramp"},
    {DetectorId::IdlsBase, "idls-base"},
    {DetectorId::IdlsRobust, "idls-robust"},
    {DetectorId::Ml, "ml"},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

void fnv1a(std::uint64_t& h, const void* data, std::size_t bytes) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
}

}  // namespace

std::string_view to_string(DetectorId d) {
  for (const auto& [id, name] : kDetectorNames) {
    if (id == d) return name;
  }
  return "?";
}

DetectorId parse_detector(std::string_view name) {
  name = trim(name);
  for (const auto& [id, known] : kDetectorNames) {
    if (known == name) return id;
  }
  throw ConfigError("unknown detector '" + std::string(name) + "'");
}

std::vector<DetectorId> parse_detector_list(std::string_view comma_list) {
  std::vector<DetectorId> out;
  while (!comma_list.empty()) {
    const auto pos = comma_list.find(',');
    const auto item = trim(comma_list.substr(0, pos));
    if (!item.empty()) out.push_back(parse_detector(item));
    if (pos == std::string_view::npos) break;
    comma_list.remove_prefix(pos + 1);
  }
  if (out.empty()) throw ConfigError("empty detector list");
  return out;
}

void SimConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("invalid config: " + msg); };
  if (m < 1) fail("m must be >= 1");
  if (n < 1) fail("n must be >= 1");
  if (trials < 1) fail("trials must be >= 1");
  if (!(alpha > 0.0)) fail("alpha must be > 0");
  if (!(lambda_eff >= 0.0)) fail("lambda_eff must be >= 0");
  if (t_max < 1) fail("t_max must be >= 1");
  if (!(epsilon > 0.0)) fail("epsilon must be > 0");
  if (ebn0_db_grid.empty()) fail("ebn0_db_grid is empty");
  for (double e : ebn0_db_grid) {
    if (!std::isfinite(e)) fail("ebn0_db_grid has a non-finite entry");
  }
  if (detectors.empty()) fail("detectors is empty");
}

double noise_variance_from_ebn0(double ebn0_db, int m, int bits) {
  return static_cast<double>(m) / (static_cast<double>(bits) * std::pow(10.0, ebn0_db / 10.0));
}

std::uint64_t SystemInstance::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  fnv1a(h, channel.data(), sizeof(cplx) * static_cast<std::size_t>(channel.size()));
  fnv1a(h, tx_symbols.data(), sizeof(cplx) * static_cast<std::size_t>(tx_symbols.size()));
  fnv1a(h, noise.data(), sizeof(cplx) * static_cast<std::size_t>(noise.size()));
  fnv1a(h, rx.data(), sizeof(cplx) * static_cast<std::size_t>(rx.size()));
  fnv1a(h, &noise_var, sizeof(noise_var));
  return h;
}

SystemInstance sample_instance(int m, int n, const Constellation& c, double noise_var,
                               Rng& rng) {
  SystemInstance inst;
  inst.noise_var = noise_var;
  inst.channel.resize(n, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) inst.channel(i, j) = rng.complex_normal(1.0);
  }
  inst.tx_symbols.resize(m);
  inst.tx_indices.resize(static_cast<std::size_t>(m));
  const auto order = static_cast<std::uint32_t>(c.order());
  for (int j = 0; j < m; ++j) {
    const std::uint32_t k = rng.index(order);
    inst.tx_indices[static_cast<std::size_t>(j)] = k;
    inst.tx_symbols[j] = c.points[k];
  }
  inst.noise.resize(n);
  for (int i = 0; i < n; ++i) inst.noise[i] = rng.complex_normal(noise_var);
  inst.rx = inst.channel * inst.tx_symbols + inst.noise;
  return inst;
}

SystemInstance sample_instance(const SimConfig& cfg, const Constellation& c, double ebn0_db,
                               Rng& rng) {
  const double var = noise_variance_from_ebn0(ebn0_db, cfg.m, c.bits_per_symbol);
  return sample_instance(cfg.m, cfg.n, c, var, rng);
}

}  // namespace rampdet
