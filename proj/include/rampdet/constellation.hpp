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
#include <span>
#include <string_view>
#include <vector>

#include "rampdet/types.hpp"

namespace rampdet {

enum class Modulation { Qpsk, Qam16, Qam64 };

std::string_view to_string(Modulation m);
/// Accepts "QPSK", "QAM16", "QAM64" (case-insensitive). Throws ConfigError otherwise.
Modulation parse_modulation(std::string_view name);

/// Square Gray-coded QAM alphabet with unit average energy.
///
/// Point k carries bit label `bit_labels[k]`; the high half of the label
/// selects the in-phase level and the low half the quadrature level, each
/// Gray-coded along its axis.
struct Constellation {
  std::vector<cplx> points;
  std::vector<std::uint32_t> bit_labels;
  int bits_per_symbol = 0;

  std::size_t order() const noexcept { return points.size(); }
  double max_magnitude() const;
};

Constellation make_constellation(Modulation m);

struct HardDecision {
  std::vector<std::uint32_t> indices;
  /// Row-major M x b bit matrix, most significant label bit first.
  std::vector<std::uint8_t> bits;
};

/// Nearest-point slicing; equidistant candidates resolve to the lowest index.
/// Throws NumericError on non-finite input.
HardDecision hard_decision(const CVector& s_hat, const Constellation& c);

/// Nearest-point index only (no bit expansion).
std::vector<std::uint32_t> slice_indices(const CVector& s_hat, const Constellation& c);

/// Number of differing label bits between detected and transmitted indices.
std::uint64_t count_bit_errors(const Constellation& c, std::span<const std::uint32_t> detected,
                               std::span<const std::uint32_t> sent);

}  // namespace rampdet
