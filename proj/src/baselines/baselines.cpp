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

#include "rampdet/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "../ramp/amp_loop.hpp"

namespace rampdet {

CVector zf_detect(const CVector& y, const CMatrix& h) {
  require_same(h.rows(), y.size(), "zf_detect: rows(H) vs len(y)");
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(h);
  const long full = std::min(h.rows(), h.cols());
  if (cod.rank() < full) {
    throw RankDeficientError("zf_detect: channel rank " + std::to_string(cod.rank()) + " < " +
                                 std::to_string(full),
                             cod.rank());
  }
  return cod.solve(y);
}

CVector lmmse_detect(const CVector& y, const CMatrix& h, double noise_var) {
  require_same(h.rows(), y.size(), "lmmse_detect: rows(H) vs len(y)");
  if (!(noise_var > 0.0)) throw NumericError("lmmse_detect: noise variance must be > 0");
  CMatrix a = h.adjoint() * h;
  a.diagonal().array() += noise_var;
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw SingularSystemError("lmmse_detect: factorization failed", 0.0);
  }
  return llt.solve(h.adjoint() * y);
}

cplx posterior_mean(cplx r, double v, const Constellation& c, double* posterior_var) {
  const std::size_t k = c.order();
  double best = -std::numeric_limits<double>::infinity();
  // Log-weights are shifted by their maximum before exponentiation.
  double logw[64];
  for (std::size_t i = 0; i < k; ++i) {
    logw[i] = -std::norm(r - c.points[i]) / v;
    best = std::max(best, logw[i]);
  }
  double total = 0.0;
  cplx mean{};
  double second = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double w = std::exp(logw[i] - best);
    total += w;
    mean += w * c.points[i];
    second += w * std::norm(c.points[i]);
  }
  mean /= total;
  if (posterior_var) *posterior_var = std::max(0.0, second / total - std::norm(mean));
  return mean;
}

AmpResult standard_amp_detect(const CVector& y, const CMatrix& h, double noise_var,
                              const Constellation& c, const DetectorParams& params,
                              OpCounter* ops) {
  if (!(noise_var > 0.0)) throw NumericError("standard_amp_detect: noise variance must be > 0");
  const detail::NormalizedProblem problem = detail::normalize(h, y, ops);
  const auto order = static_cast<std::uint64_t>(c.order());

  auto denoise = [&](const CVector&, const CVector& r, double v, CVector& out) {
    double var_sum = 0.0;
    for (Eigen::Index m = 0; m < r.size(); ++m) {
      double var = 0.0;
      out[m] = posterior_mean(r[m], v, c, &var);
      var_sum += var;
    }
    if (ops) ops->add(order * static_cast<std::uint64_t>(r.size()));
    // d E[s|r] / dr = Var[s|r] / v for a CN(0, v) likelihood.
    return var_sum / (v * static_cast<double>(r.size()));
  };

  detail::LoopOptions loop;
  loop.params = &params;
  loop.ops = ops;
  return detail::amp_iterate(problem, loop, denoise);
}

MlResult ml_oracle_detect(const CVector& y, const CMatrix& h, const Constellation& c) {
  require_same(h.rows(), y.size(), "ml_oracle_detect: rows(H) vs len(y)");
  const auto k = static_cast<std::uint32_t>(c.order());
  const Eigen::Index m = h.cols();
  double candidates = std::pow(static_cast<double>(k), static_cast<double>(m));
  if (candidates > static_cast<double>(kMlSearchLimit)) {
    throw Error("ml_oracle_detect: K^M = " + std::to_string(candidates) +
                " exceeds the exhaustive-search limit");
  }

  // Column contributions H_j c_i, so each candidate costs M vector adds.
  std::vector<CVector> contrib(static_cast<std::size_t>(m) * k);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (std::uint32_t i = 0; i < k; ++i) {
      contrib[static_cast<std::size_t>(j) * k + i] = h.col(j) * c.points[i];
    }
  }

  std::vector<std::uint32_t> digits(static_cast<std::size_t>(m), 0);
  MlResult best;
  best.metric = std::numeric_limits<double>::infinity();
  CVector residual(y.size());
  while (true) {
    residual = y;
    for (Eigen::Index j = 0; j < m; ++j) {
      residual -= contrib[static_cast<std::size_t>(j) * k + digits[static_cast<std::size_t>(j)]];
    }
    const double metric = residual.squaredNorm();
    if (metric < best.metric) {
      best.metric = metric;
      best.indices = digits;
    }
    // Odometer with symbol 0 most significant gives lexicographic order.
    Eigen::Index pos = m - 1;
    while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] == k) {
      digits[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  best.s_hat.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) best.s_hat[j] = c.points[best.indices[static_cast<std::size_t>(j)]];
  return best;
}

}  // namespace rampdet
