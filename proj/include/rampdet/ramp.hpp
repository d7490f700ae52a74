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

#include <limits>
#include <optional>
#include <vector>

#include "rampdet/constellation.hpp"
#include "rampdet/detector_params.hpp"
#include "rampdet/idls.hpp"
#include "rampdet/op_counter.hpp"
#include "rampdet/types.hpp"

namespace rampdet {

/// Lower bound applied to the residual-power variance estimate.
inline constexpr double kVarianceFloor = 1e-12;

struct IterationRecord {
  double v = 0.0;
  double eps = 0.0;
  double divergence = 0.0;
  /// (1/M) ||s_hat - s||^2, only when the true symbols are supplied.
  std::optional<double> mse;
  /// (1/M) ||r - s||^2, only when the true symbols are supplied.
  std::optional<double> effective_var;
};

struct DetectorState {
  CVector s_hat;
  CVector residual;
  double eff_var = 0.0;
  int iter = 0;
  double eps_t = std::numeric_limits<double>::infinity();
  double aspect_ratio = 1.0;
  std::vector<IterationRecord> trace;
};

/// Effective observation and variance estimate captured at one iteration.
struct Capture {
  int iteration = 0;
  CVector r;
  double v = 0.0;
};

struct AmpResult {
  CVector s_hat;
  DetectorState state;
  std::optional<int> diverged_at;
  std::vector<Capture> captures;
  /// s_hat after every iteration, when requested.
  std::vector<CVector> estimates;

  bool diverged() const { return diverged_at.has_value(); }
};

struct RampOptions {
  Variant variant = Variant::Base;
  /// Compute beta from these symbols instead of the running estimate.
  const CVector* genie_symbols = nullptr;
  /// True symbols for per-iteration MSE / effective-variance records.
  const CVector* reference = nullptr;
  std::vector<int> capture_iterations;
  bool record_estimates = false;
  OpCounter* ops = nullptr;
};

// Building blocks. H here is whatever matrix the recursion runs on; the
// detectors below feed them the column-normalized channel.

/// r = s_hat + H^H z
CVector effective_observation(const CVector& s_hat, const CMatrix& h, const CVector& z);
/// v = ||z||^2 / N
double estimate_variance(const CVector& z);
/// Element-wise minimizer of (1/v)|r - s|^2 [+ |s|^2] + lambda_eff sum_i beta^2 |s - c_i|^2.
CVector ramp_denoise(const CVector& r, double v, const BetaWeights& beta, double lambda_eff,
                     Variant variant);
/// (1/M) sum_m d eta_m / d r_m with beta held fixed.
double denoiser_divergence(double v, const BetaWeights& beta, double lambda_eff,
                           Variant variant);
/// z_next = y - H s_next + (1/delta) z_prev <eta'>
CVector residual_update(const CVector& y, const CMatrix& h, const CVector& s_next,
                        const CVector& z_prev, double divergence, double aspect_ratio);

/// Scale c with c^2 = ||H||_F^2 / M; the recursion runs on H / c and y / c.
double column_scale(const CMatrix& h);

/// Regularized AMP detector (base or robust denoiser), lambda_eff = lambda / sigma^2.
AmpResult ramp_detect(const CVector& y, const CMatrix& h, double noise_var,
                      const Constellation& c, const DetectorParams& params,
                      const RampOptions& options = {});

}  // namespace rampdet
