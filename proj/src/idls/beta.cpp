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

#include <cmath>
#include <string>

#include "rampdet/idls.hpp"
#include "rampdet/kernels.hpp"

namespace rampdet {

void compute_beta_weights(const CVector& s_prev, const Constellation& c, double alpha,
                          BetaWeights& out) {
  if (!(alpha > 0.0)) throw NumericError("beta weights: alpha must be > 0");
  for (Eigen::Index m = 0; m < s_prev.size(); ++m) {
    if (!std::isfinite(s_prev[m].real()) || !std::isfinite(s_prev[m].imag())) {
      throw NumericError("beta weights: non-finite estimate at index " + std::to_string(m));
    }
  }
  const auto k = static_cast<Eigen::Index>(c.order());
  const Eigen::Index m = s_prev.size();
  out.weights.resize(k, m);
  out.b_agg.resize(m);
  out.bv_agg.resize(m);
  const auto mm = static_cast<std::size_t>(m);
  const auto kk = static_cast<std::size_t>(k);
  kernels::active().beta_weights({s_prev.data(), mm}, c.points, alpha,
                                 {out.weights.data(), mm * kk}, {out.b_agg.data(), mm},
                                 {out.bv_agg.data(), mm});
}

BetaWeights compute_beta_weights(const CVector& s_prev, const Constellation& c, double alpha) {
  BetaWeights out;
  compute_beta_weights(s_prev, c, alpha, out);
  return out;
}

}  // namespace rampdet
