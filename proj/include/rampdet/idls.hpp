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

#include <vector>

#include "rampdet/constellation.hpp"
#include "rampdet/detector_params.hpp"
#include "rampdet/op_counter.hpp"
#include "rampdet/types.hpp"

namespace rampdet {

/// Fractional-programming weights beta(i, m) = sqrt(alpha) / (|s_m - c_i|^2 + alpha)
/// and their per-symbol aggregates b_m = sum_i beta^2 c_i, bv_m = sum_i beta^2.
struct BetaWeights {
  RMatrix weights;  // K x M
  CVector b_agg;    // M
  RVector bv_agg;   // M

  long points() const { return weights.rows(); }
  long symbols() const { return weights.cols(); }
};

BetaWeights compute_beta_weights(const CVector& s_prev, const Constellation& c, double alpha);
/// Same as above, reusing the buffers in `out`.
void compute_beta_weights(const CVector& s_prev, const Constellation& c, double alpha,
                          BetaWeights& out);

/// ||y - Hs||^2 + [robust] sigma^2 ||s||^2 + lambda sum_{i,m} beta^2 |s_m - c_i|^2
double idls_objective(const CVector& y, const CMatrix& h, const CVector& s,
                      const BetaWeights& beta, const Constellation& c, double lambda,
                      double noise_var, Variant variant);

/// Caches H^H H and H^H y so repeated weight updates cost one factorization each.
class IdlsSolver {
 public:
  IdlsSolver(const CMatrix& h, const CVector& y, OpCounter* ops = nullptr);

  /// (H^H H + [robust] sigma^2 I + lambda diag(bv))^{-1} (H^H y + lambda b) via Cholesky.
  /// Throws SingularSystemError when the matrix is not numerically positive definite.
  CVector solve(const BetaWeights& beta, double lambda, double noise_var, Variant variant,
                OpCounter* ops = nullptr) const;

  long symbols() const { return gram_.rows(); }

 private:
  CMatrix gram_;
  CVector matched_;
};

CVector idls_solve_step(const CVector& y, const CMatrix& h, const BetaWeights& beta,
                        double lambda, double noise_var, Variant variant);

struct IdlsIteration {
  double eps = 0.0;
  double objective = 0.0;
};

struct IdlsResult {
  CVector s_hat;
  std::vector<IdlsIteration> trace;
  int iterations = 0;
};

/// Alternates weight updates and exact solves from s = 0. lambda = lambda_eff * sigma^2.
IdlsResult idls_detect(const CVector& y, const CMatrix& h, double noise_var,
                       const Constellation& c, const DetectorParams& params, Variant variant,
                       OpCounter* ops = nullptr);

}  // namespace rampdet
