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
#include <functional>
#include <span>
#include <vector>

#include "rampdet/constellation.hpp"
#include "rampdet/system.hpp"
#include "rampdet/types.hpp"

namespace rampdet {

/// Scalar denoiser on the effective channel r = s + w, given the index of the
/// true symbol (weights computed from the truth) and the variance to assume.
using GenieDenoiser = std::function<cplx(cplx r, double v, std::uint32_t true_index)>;

GenieDenoiser identity_denoiser();
GenieDenoiser ramp_genie_denoiser(const Constellation& c, double alpha, double lambda_eff,
                                  Variant variant);

struct MseEstimate {
  double mse = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

inline constexpr std::size_t kMinMseSamples = 100;

/// Monte-Carlo E|eta(s + w) - s|^2, s uniform on the alphabet, w ~ CN(0, sigma2).
/// Samples are drawn in fixed-size blocks with one substream per block.
MseEstimate mse_of_denoiser(const GenieDenoiser& denoiser, double sigma2,
                            const Constellation& c, std::size_t mc_samples, std::uint64_t seed);

struct SeTrace {
  std::vector<double> sigma2_seq;  // sigma_0^2 .. sigma_steps^2
  std::vector<double> mse_seq;     // MSE(eta_t, sigma_t^2), t = 0 .. steps-1
  std::vector<double> empirical_mse_seq;
};

using MseFunction = std::function<double(double sigma2)>;

/// sigma_{t+1}^2 = sigma_n^2 + MSE(sigma_t^2) / delta, from
/// sigma_0^2 = sigma_n^2 + 1 / delta (zero initial estimate, unit symbol energy).
SeTrace se_recursion(double aspect_ratio, double sigma_n2, int steps, const MseFunction& mse);

/// Recursion with the Monte-Carlo genie-weight RAMP denoiser MSE.
SeTrace se_recursion(const SimConfig& cfg, double sigma_n2, int steps, Variant variant,
                     std::size_t mc_samples = 100000);

struct QqDiagnostic {
  std::vector<double> sorted_samples;
  std::vector<double> theoretical_quantiles;
  double ks_stat = 0.0;
};

inline constexpr std::size_t kMinQqSamples = 1000;

/// Kolmogorov-Smirnov distance of `sorted` (ascending) to the standard normal.
double ks_statistic_normal(std::span<const double> sorted);

/// Sorted samples paired with normal quantiles at (k - 0.5) / n.
/// Throws Error with fewer than kMinQqSamples samples.
QqDiagnostic qq_diagnostic(std::span<const double> samples);

/// Appends Re and Im of (r_m - s_m) / sqrt(v / 2), unit variance per real
/// dimension when v is the per-symbol complex variance.
void append_normalized_errors(const CVector& r, const CVector& s, double v,
                              std::vector<double>& out);

}  // namespace rampdet
