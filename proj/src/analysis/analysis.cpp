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

#include "rampdet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "rampdet/idls.hpp"
#include "rampdet/random.hpp"

namespace rampdet {

GenieDenoiser identity_denoiser() {
  return [](cplx r, double, std::uint32_t) { return r; };
}

GenieDenoiser ramp_genie_denoiser(const Constellation& c, double alpha, double lambda_eff,
                                  Variant variant) {
  // With weights taken from the true symbol, b and bv depend only on its index.
  CVector truth(static_cast<Eigen::Index>(c.order()));
  for (std::size_t i = 0; i < c.order(); ++i) truth[static_cast<Eigen::Index>(i)] = c.points[i];
  const BetaWeights beta = compute_beta_weights(truth, c, alpha);
  std::vector<cplx> b(beta.b_agg.data(), beta.b_agg.data() + beta.b_agg.size());
  std::vector<double> bv(beta.bv_agg.data(), beta.bv_agg.data() + beta.bv_agg.size());
  const bool robust = variant == Variant::Robust;
  return [b = std::move(b), bv = std::move(bv), lambda_eff, robust](cplx r, double v,
                                                                    std::uint32_t idx) {
    const double lv = lambda_eff * v;
    return (r + lv * b[idx]) / (1.0 + (robust ? v : 0.0) + lv * bv[idx]);
  };
}

MseEstimate mse_of_denoiser(const GenieDenoiser& denoiser, double sigma2,
                            const Constellation& c, std::size_t mc_samples, std::uint64_t seed) {
  if (mc_samples < kMinMseSamples) {
    throw Error("mse_of_denoiser: need at least " + std::to_string(kMinMseSamples) + " samples");
  }
  if (!(sigma2 > 0.0)) throw NumericError("mse_of_denoiser: sigma2 must be > 0");
  constexpr std::size_t kBlock = 4096;
  const auto order = static_cast<std::uint32_t>(c.order());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t start = 0, block = 0; start < mc_samples; start += kBlock, ++block) {
    Rng rng = Rng::substream(seed, {block});
    const std::size_t count = std::min(kBlock, mc_samples - start);
    double block_sum = 0.0;
    double block_sq = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint32_t idx = rng.index(order);
      const cplx s = c.points[idx];
      const double err = std::norm(denoiser(s + rng.complex_normal(sigma2), sigma2, idx) - s);
      block_sum += err;
      block_sq += err * err;
    }
    sum += block_sum;
    sum_sq += block_sq;
  }
  const auto n = static_cast<double>(mc_samples);
  MseEstimate est;
  est.samples = mc_samples;
  est.mse = sum / n;
  const double var = std::max(0.0, (sum_sq - n * est.mse * est.mse) / (n - 1.0));
  est.std_error = std::sqrt(var / n);
  return est;
}

SeTrace se_recursion(double aspect_ratio, double sigma_n2, int steps, const MseFunction& mse) {
  if (!(aspect_ratio > 0.0)) throw NumericError("se_recursion: aspect ratio must be > 0");
  SeTrace trace;
  double sigma2 = sigma_n2 + 1.0 / aspect_ratio;
  trace.sigma2_seq.push_back(sigma2);
  for (int t = 0; t < steps; ++t) {
    const double e = mse(sigma2);
    trace.mse_seq.push_back(e);
    sigma2 = sigma_n2 + e / aspect_ratio;
    trace.sigma2_seq.push_back(sigma2);
  }
  return trace;
}

SeTrace se_recursion(const SimConfig& cfg, double sigma_n2, int steps, Variant variant,
                     std::size_t mc_samples) {
  const Constellation c = make_constellation(cfg.modulation);
  const GenieDenoiser den = ramp_genie_denoiser(c, cfg.alpha, cfg.lambda_eff, variant);
  int step = 0;
  return se_recursion(cfg.aspect_ratio(), sigma_n2, steps, [&](double sigma2) {
    const auto seed = derive_seed(cfg.seed, {0x5e, static_cast<std::uint64_t>(step++)});
    return mse_of_denoiser(den, sigma2, c, mc_samples, seed).mse;
  });
}

double ks_statistic_normal(std::span<const double> sorted) {
  const boost::math::normal_distribution<double> normal;
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double f = boost::math::cdf(normal, sorted[k]);
    d = std::max({d, static_cast<double>(k + 1) / n - f, f - static_cast<double>(k) / n});
  }
  return d;
}

QqDiagnostic qq_diagnostic(std::span<const double> samples) {
  if (samples.size() < kMinQqSamples) {
    throw Error("qq_diagnostic: " + std::to_string(samples.size()) + " samples, need at least " +
                std::to_string(kMinQqSamples));
  }
  for (double x : samples) {
    if (!std::isfinite(x)) throw NumericError("qq_diagnostic: non-finite sample");
  }
  QqDiagnostic q;
  q.sorted_samples.assign(samples.begin(), samples.end());
  std::sort(q.sorted_samples.begin(), q.sorted_samples.end());
  const boost::math::normal_distribution<double> normal;
  const auto n = static_cast<double>(samples.size());
  q.theoretical_quantiles.reserve(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    q.theoretical_quantiles.push_back(
        boost::math::quantile(normal, (static_cast<double>(k) + 0.5) / n));
  }
  q.ks_stat = ks_statistic_normal(q.sorted_samples);
  return q;
}

void append_normalized_errors(const CVector& r, const CVector& s, double v,
                              std::vector<double>& out) {
  require_same(r.size(), s.size(), "append_normalized_errors");
  if (!(v > 0.0)) throw NumericError("append_normalized_errors: v must be > 0");
  const double scale = 1.0 / std::sqrt(v / 2.0);
  for (Eigen::Index m = 0; m < r.size(); ++m) {
    const cplx e = (r[m] - s[m]) * scale;
    out.push_back(e.real());
    out.push_back(e.imag());
  }
}

}  // namespace rampdet
