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
#include <vector>

#include "rampdet/constellation.hpp"
#include "rampdet/detector_params.hpp"
#include "rampdet/op_counter.hpp"
#include "rampdet/ramp.hpp"
#include "rampdet/types.hpp"

namespace rampdet {

/// Least squares for M <= N, minimum-norm solution for M > N.
/// Throws RankDeficientError if H does not have full rank.
CVector zf_detect(const CVector& y, const CMatrix& h);

/// (H^H H + sigma^2 I)^{-1} H^H y
CVector lmmse_detect(const CVector& y, const CMatrix& h, double noise_var);

/// Posterior mean of a uniform discrete prior observed through CN(0, v) noise.
/// Writes the posterior variance to `posterior_var` when non-null.
cplx posterior_mean(cplx r, double v, const Constellation& c, double* posterior_var = nullptr);

/// AMP with the Bayes posterior-mean denoiser; divergence is the analytic
/// (1/M) sum_m Var[s_m | r_m] / v.
AmpResult standard_amp_detect(const CVector& y, const CMatrix& h, double noise_var,
                              const Constellation& c, const DetectorParams& params,
                              OpCounter* ops = nullptr);

inline constexpr std::uint64_t kMlSearchLimit = std::uint64_t{1} << 20;

struct MlResult {
  CVector s_hat;
  std::vector<std::uint32_t> indices;
  double metric = 0.0;
};

/// Exhaustive search over S^M. Ties keep the lexicographically first index
/// vector (symbol 0 most significant). Throws Error when K^M > kMlSearchLimit.
MlResult ml_oracle_detect(const CVector& y, const CMatrix& h, const Constellation& c);

}  // namespace rampdet
