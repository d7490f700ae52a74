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

#include "amp_loop.hpp"
#include "rampdet/kernels.hpp"
#include "rampdet/ramp.hpp"

namespace rampdet {

namespace {

void check_denoise_args(double v, double lambda_eff) {
  if (!(v >= 0.0)) throw NumericError("denoiser: variance must be >= 0 (got " + std::to_string(v) + ")");
  if (!(lambda_eff >= 0.0)) throw NumericError("denoiser: lambda_eff must be >= 0");
}

}  // namespace

CVector effective_observation(const CVector& s_hat, const CMatrix& h, const CVector& z) {
  require_same(h.cols(), s_hat.size(), "effective_observation: cols(H) vs len(s_hat)");
  require_same(h.rows(), z.size(), "effective_observation: rows(H) vs len(z)");
  CVector r(s_hat.size());
  kernels::active().matvec_adjoint(kernels::view(h), {z.data(), static_cast<std::size_t>(z.size())},
                                   {r.data(), static_cast<std::size_t>(r.size())});
  r += s_hat;
  return r;
}

double estimate_variance(const CVector& z) {
  if (z.size() == 0) throw DimensionError("estimate_variance: empty residual");
  return kernels::active().squared_norm({z.data(), static_cast<std::size_t>(z.size())}) /
         static_cast<double>(z.size());
}

CVector ramp_denoise(const CVector& r, double v, const BetaWeights& beta, double lambda_eff,
                     Variant variant) {
  check_denoise_args(v, lambda_eff);
  require_same(beta.symbols(), r.size(), "ramp_denoise: beta symbols vs len(r)");
  if (!detail::all_finite(r)) throw NumericError("ramp_denoise: non-finite observation");
  const auto mm = static_cast<std::size_t>(r.size());
  CVector out(r.size());
  kernels::active().ramp_denoise({r.data(), mm}, {beta.b_agg.data(), mm}, {beta.bv_agg.data(), mm},
                                 {v, lambda_eff, variant == Variant::Robust}, {out.data(), mm});
  return out;
}

double denoiser_divergence(double v, const BetaWeights& beta, double lambda_eff,
                           Variant variant) {
  check_denoise_args(v, lambda_eff);
  if (beta.symbols() == 0) throw DimensionError("denoiser_divergence: no symbols");
  const double base = 1.0 + (variant == Variant::Robust ? v : 0.0);
  double sum = 0.0;
  for (Eigen::Index m = 0; m < beta.symbols(); ++m) {
    sum += 1.0 / (base + lambda_eff * v * beta.bv_agg[m]);
  }
  return sum / static_cast<double>(beta.symbols());
}

CVector residual_update(const CVector& y, const CMatrix& h, const CVector& s_next,
                        const CVector& z_prev, double divergence, double aspect_ratio) {
  require_same(h.rows(), y.size(), "residual_update: rows(H) vs len(y)");
  require_same(h.cols(), s_next.size(), "residual_update: cols(H) vs len(s)");
  require_same(y.size(), z_prev.size(), "residual_update: len(y) vs len(z)");
  if (!(aspect_ratio > 0.0)) throw NumericError("residual_update: aspect ratio must be > 0");
  const auto& k = kernels::active();
  const auto nn = static_cast<std::size_t>(y.size());
  CVector hs(y.size());
  CVector z(y.size());
  k.matvec(kernels::view(h), {s_next.data(), static_cast<std::size_t>(s_next.size())},
           {hs.data(), nn});
  k.residual_combine({y.data(), nn}, {hs.data(), nn}, {z_prev.data(), nn},
                     divergence / aspect_ratio, {z.data(), nn});
  return z;
}

double column_scale(const CMatrix& h) {
  return std::sqrt(h.squaredNorm() / static_cast<double>(h.cols()));
}

AmpResult ramp_detect(const CVector& y, const CMatrix& h, double noise_var,
                      const Constellation& c, const DetectorParams& params,
                      const RampOptions& options) {
  if (!(noise_var > 0.0)) throw NumericError("ramp_detect: noise variance must be > 0");
  if (!(params.lambda_eff >= 0.0)) throw NumericError("ramp_detect: lambda_eff must be >= 0");
  if (options.genie_symbols) {
    require_same(options.genie_symbols->size(), h.cols(), "ramp_detect: genie symbols vs cols(H)");
  }
  if (options.reference) {
    require_same(options.reference->size(), h.cols(), "ramp_detect: reference vs cols(H)");
  }
  const detail::NormalizedProblem problem = detail::normalize(h, y, options.ops);

  const auto& k = kernels::active();
  const auto mm = static_cast<std::size_t>(h.cols());
  const auto order = static_cast<std::uint64_t>(c.order());
  const bool robust = options.variant == Variant::Robust;

  BetaWeights beta;
  if (options.genie_symbols) compute_beta_weights(*options.genie_symbols, c, params.alpha, beta);

  auto denoise = [&](const CVector& s_hat, const CVector& r, double v, CVector& out) {
    if (!options.genie_symbols) {
      compute_beta_weights(s_hat, c, params.alpha, beta);
      if (options.ops) options.ops->add(order * mm);
    }
    const double inv_sum = k.ramp_denoise({r.data(), mm}, {beta.b_agg.data(), mm},
                                          {beta.bv_agg.data(), mm},
                                          {v, params.lambda_eff, robust}, {out.data(), mm});
    if (options.ops) options.ops->add(mm);
    return inv_sum / static_cast<double>(mm);
  };

  detail::LoopOptions loop;
  loop.params = &params;
  loop.reference = options.reference;
  loop.capture_iterations = &options.capture_iterations;
  loop.record_estimates = options.record_estimates;
  loop.ops = options.ops;
  return detail::amp_iterate(problem, loop, denoise);
}

}  // namespace rampdet
