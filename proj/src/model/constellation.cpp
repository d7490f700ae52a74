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

#include "rampdet/constellation.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <string>

namespace rampdet {

std::string_view to_string(Modulation m) {
  switch (m) {
    case Modulation::Qpsk:
      return "QPSK";
    case Modulation::Qam16:
      return "QAM16";
    case Modulation::Qam64:
      return "QAM64";
  }
  return "?";
}

Modulation parse_modulation(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  if (upper == "QPSK" || upper == "QAM4") return Modulation::Qpsk;
  if (upper == "QAM16" || upper == "16QAM") return Modulation::Qam16;
  if (upper == "QAM64" || upper == "64QAM") return Modulation::Qam64;
  throw ConfigError("unsupported modulation '" + std::string(name) + "'");
}

namespace {

int bits_for(Modulation m) {
  switch (m) {
    case Modulation::Qpsk:
      return 2;
    case Modulation::Qam16:
      return 4;
    case Modulation::Qam64:
      return 6;
  }
  throw ConfigError("unsupported modulation");
}

std::uint32_t gray_decode(std::uint32_t g) {
  std::uint32_t v = g;
  for (std::uint32_t shift = 1; shift < 32; shift <<= 1) v ^= v >> shift;
  return v;
}

}  // namespace

double Constellation::max_magnitude() const {
  double best = 0.0;
  for (const auto& p : points) best = std::max(best, std::abs(p));
  return best;
}

Constellation make_constellation(Modulation m) {
  const int bits = bits_for(m);
  const int half = bits / 2;
  const std::uint32_t levels = 1u << half;
  const std::uint32_t order = 1u << bits;
  // Average energy of the unscaled grid {+-1, +-3, ...}^2 is 2 (L^2 - 1) / 3.
  const double scale = 1.0 / std::sqrt(2.0 * (static_cast<double>(levels * levels) - 1.0) / 3.0);

  Constellation c;
  c.bits_per_symbol = bits;
  c.points.reserve(order);
  c.bit_labels.reserve(order);
  for (std::uint32_t label = 0; label < order; ++label) {
    const std::uint32_t i_level = gray_decode(label >> half);
    const std::uint32_t q_level = gray_decode(label & (levels - 1));
    // Label 0 sits at the positive corner: (+1 + 1j)/sqrt(2) for QPSK.
    const double re = static_cast<double>(levels - 1) - 2.0 * static_cast<double>(i_level);
    const double im = static_cast<double>(levels - 1) - 2.0 * static_cast<double>(q_level);
    c.points.emplace_back(re * scale, im * scale);
    c.bit_labels.push_back(label);
  }
  return c;
}

std::vector<std::uint32_t> slice_indices(const CVector& s_hat, const Constellation& c) {
  std::vector<std::uint32_t> idx(static_cast<std::size_t>(s_hat.size()));
  for (Eigen::Index m = 0; m < s_hat.size(); ++m) {
    const cplx x = s_hat[m];
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
      throw NumericError("hard_decision: non-finite estimate at index " + std::to_string(m));
    }
    std::uint32_t best = 0;
    double best_d = std::norm(x - c.points[0]);
    for (std::uint32_t k = 1; k < c.points.size(); ++k) {
      const double d = std::norm(x - c.points[k]);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    idx[static_cast<std::size_t>(m)] = best;
  }
  return idx;
}

HardDecision hard_decision(const CVector& s_hat, const Constellation& c) {
  HardDecision out;
  out.indices = slice_indices(s_hat, c);
  const int b = c.bits_per_symbol;
  out.bits.resize(out.indices.size() * static_cast<std::size_t>(b));
  for (std::size_t m = 0; m < out.indices.size(); ++m) {
    const std::uint32_t label = c.bit_labels[out.indices[m]];
    for (int j = 0; j < b; ++j) {
      out.bits[m * static_cast<std::size_t>(b) + static_cast<std::size_t>(j)] =
          static_cast<std::uint8_t>((label >> (b - 1 - j)) & 1u);
    }
  }
  return out;
}

std::uint64_t count_bit_errors(const Constellation& c, std::span<const std::uint32_t> detected,
                               std::span<const std::uint32_t> sent) {
  require_same(static_cast<long>(detected.size()), static_cast<long>(sent.size()),
               "count_bit_errors");
  std::uint64_t errors = 0;
  for (std::size_t m = 0; m < sent.size(); ++m) {
    errors += static_cast<std::uint64_t>(
        std::popcount(c.bit_labels[detected[m]] ^ c.bit_labels[sent[m]]));
  }
  return errors;
}

}  // namespace rampdet
