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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rampdet/constellation.hpp"
#include "rampdet/random.hpp"
#include "rampdet/types.hpp"

namespace rampdet {

enum class DetectorId { Zf, Lmmse, StandardAmp, Ramp, RobustRamp, IdlsBase, IdlsRobust, Ml };

std::string_view to_string(DetectorId d);
DetectorId parse_detector(std::string_view name);
std::vector<DetectorId> parse_detector_list(std::string_view comma_list);

struct SimConfig {
  int m = 32;
  int n = 26;
  Modulation modulation = Modulation::Qpsk;
  std::vector<double> ebn0_db_grid{6.0, 10.0, 14.0};
  int trials = 100;
  double alpha = 0.1;
  double lambda_eff = 1.0;
  int t_max = 100;
  double epsilon = 1e-6;
  std::uint64_t seed = 1;
  std::vector<DetectorId> detectors{DetectorId::Ramp, DetectorId::RobustRamp};

  double aspect_ratio() const { return static_cast<double>(n) / static_cast<double>(m); }
  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

/// sigma_n^2 = M / (b * 10^(EbN0/10)).
double noise_variance_from_ebn0(double ebn0_db, int m, int bits);

/// One realization of y = H s + n.
struct SystemInstance {
  CMatrix channel;                         // N x M
  CVector tx_symbols;                      // M
  std::vector<std::uint32_t> tx_indices;   // M
  CVector noise;                           // N
  CVector rx;                              // N
  double noise_var = 0.0;

  long rows() const { return channel.rows(); }
  long cols() const { return channel.cols(); }
  /// FNV-1a over the raw bytes of H, s, n, y and sigma^2.
  std::uint64_t digest() const;
};

/// Draw order is fixed: H column by column, then symbol indices, then noise.
SystemInstance sample_instance(const SimConfig& cfg, const Constellation& c, double ebn0_db,
                               Rng& rng);

/// Lower-level variant used by tests that need arbitrary dimensions.
SystemInstance sample_instance(int m, int n, const Constellation& c, double noise_var, Rng& rng);

}  // namespace rampdet
