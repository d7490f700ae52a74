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

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "rampdet/baselines.hpp"
#include "rampdet/idls.hpp"
#include "rampdet/oracle.hpp"
#include "rampdet/ramp.hpp"
#include "rampdet/system.hpp"

namespace rampdet {

namespace {

constexpr Variant kVariants[] = {Variant::Base, Variant::Robust};

struct ScalarCase {
  cplx r;
  double v;
  double lambda_eff;
  BetaWeights beta;
};

ScalarCase draw_scalar_case(Rng& rng, const Constellation& c) {
  ScalarCase sc;
  sc.r = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
  sc.v = rng.uniform(0.05, 2.0);
  sc.lambda_eff = rng.uniform(0.0, 5.0);
  CVector prev(1);
  prev[0] = {rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)};
  sc.beta = compute_beta_weights(prev, c, rng.uniform(0.02, 1.0));
  return sc;
}

std::span<const double> beta_row(const BetaWeights& beta) {
  return {beta.weights.data(), static_cast<std::size_t>(beta.weights.rows())};
}

}  // namespace

CheckResult check_denoiser(int samples, std::uint64_t seed, bool corrupt) {
  constexpr double kTolerance = 2e-3;
  constexpr double kStationarity = 1e-12;
  const Constellation c = make_constellation(Modulation::Qpsk);
  Rng rng(seed);
  double worst = 0.0;
  double worst_residual = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Variant variant = kVariants[k % 2];
    const ScalarCase sc = draw_scalar_case(rng, c);
    CVector r(1);
    r[0] = sc.r;
    cplx eta = ramp_denoise(r, sc.v, sc.beta, sc.lambda_eff, variant)[0];
    if (corrupt) eta += cplx{0.01, 0.0};
    const cplx grid = oracle::grid_argmin(sc.r, sc.v, beta_row(sc.beta), c.points, sc.lambda_eff,
                                          variant, 2.0);
    worst = std::max(worst, std::abs(eta - grid));
    const cplx g = oracle::scalar_gradient(eta, sc.r, sc.v, beta_row(sc.beta), c.points,
                                           sc.lambda_eff, variant);
    worst_residual = std::max(worst_residual, std::abs(g));
  }
  CheckResult res;
  res.name = "denoiser_grid_search";
  res.tolerance = kTolerance;
  res.observed = worst;
  res.passed = worst <= kTolerance && worst_residual <= kStationarity;
  res.detail = fmt::format("{} inputs, max |eta - grid| = {:.3e}, max stationarity residual = "
                           "{:.3e} (tol {:.0e})",
                           samples, worst, worst_residual, kStationarity);
  return res;
}

CheckResult check_divergence(int samples, std::uint64_t seed) {
  constexpr double kTolerance = 1e-6;
  constexpr double kStep = 1e-4;
  const Constellation c = make_constellation(Modulation::Qpsk);
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Variant variant = kVariants[k % 2];
    const ScalarCase sc = draw_scalar_case(rng, c);
    const double analytic = denoiser_divergence(sc.v, sc.beta, sc.lambda_eff, variant);
    const auto f = [&](cplx x) {
      CVector r(1);
      r[0] = x;
      return ramp_denoise(r, sc.v, sc.beta, sc.lambda_eff, variant)[0];
    };
    const double numeric = oracle::central_difference(f, sc.r, kStep);
    worst = std::max(worst, std::abs(analytic - numeric) / std::abs(numeric));
  }
  CheckResult res;
  res.name = "divergence_finite_difference";
  res.tolerance = kTolerance;
  res.observed = worst;
  res.passed = worst <= kTolerance;
  res.detail = fmt::format("{} inputs, max relative error = {:.3e}", samples, worst);
  return res;
}

CheckResult check_closed_form(int instances, std::uint64_t seed) {
  constexpr double kSolveTolerance = 1e-10;
  constexpr double kGradientTolerance = 1e-8;
  const Constellation c = make_constellation(Modulation::Qpsk);
  Rng rng(seed);
  double worst_solve = 0.0;
  double worst_gradient = 0.0;
  int wide = 0;
  for (int k = 0; k < instances; ++k) {
    const Variant variant = kVariants[k % 2];
    const int n = 4 + static_cast<int>(rng.index(29));
    const int m = 4 + static_cast<int>(rng.index(29));
    wide += m > n ? 1 : 0;
    const double noise_var = rng.uniform(0.05, 1.0);
    const SystemInstance inst = sample_instance(m, n, c, noise_var, rng);
    CVector prev(m);
    for (int j = 0; j < m; ++j) prev[j] = {rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)};
    const BetaWeights beta = compute_beta_weights(prev, c, 0.1);
    const double lambda = rng.uniform(0.5, 5.0) * noise_var;

    const CVector fast = idls_solve_step(inst.rx, inst.channel, beta, lambda, noise_var, variant);
    const CVector dense = oracle::dense_normal_solve(inst.rx, inst.channel, beta.weights,
                                                     c.points, lambda, noise_var, variant);
    worst_solve = std::max(worst_solve, (fast - dense).norm() / dense.norm());
    const CVector grad = oracle::objective_gradient(inst.rx, inst.channel, fast, beta.weights,
                                                    c.points, lambda, noise_var, variant);
    const double scale = (inst.channel.adjoint() * inst.rx).norm() + lambda * beta.b_agg.norm();
    worst_gradient = std::max(worst_gradient, grad.norm() / scale);
  }
  CheckResult res;
  res.name = "closed_form_vs_dense_solve";
  res.tolerance = kSolveTolerance;
  res.observed = worst_solve;
  res.passed = worst_solve <= kSolveTolerance && worst_gradient <= kGradientTolerance;
  res.detail = fmt::format("{} instances ({} with M > N), max relative solve error = {:.3e}, "
                           "max relative gradient = {:.3e} (tol {:.0e})",
                           instances, wide, worst_solve, worst_gradient, kGradientTolerance);
  return res;
}

CheckResult check_ml_agreement(int instances, std::uint64_t seed, double ebn0_db,
                               double lambda_eff, double threshold) {
  SimConfig cfg;
  cfg.m = 4;
  cfg.n = 4;
  cfg.lambda_eff = lambda_eff;
  const Constellation c = make_constellation(Modulation::Qpsk);
  const DetectorParams params = DetectorParams::from(cfg);
  RampOptions opt;
  opt.variant = Variant::Robust;
  int agree = 0;
  for (int k = 0; k < instances; ++k) {
    Rng rng = Rng::substream(seed, {static_cast<std::uint64_t>(k)});
    const SystemInstance inst = sample_instance(cfg, c, ebn0_db, rng);
    const AmpResult ramp = ramp_detect(inst.rx, inst.channel, inst.noise_var, c, params, opt);
    const MlResult ml = ml_oracle_detect(inst.rx, inst.channel, c);
    if (!ramp.diverged() && slice_indices(ramp.s_hat, c) == ml.indices) ++agree;
  }
  CheckResult res;
  res.name = "ml_agreement_m4";
  res.tolerance = threshold;
  res.observed = static_cast<double>(agree) / instances;
  res.passed = res.observed >= threshold;
  res.detail = fmt::format("{}/{} instances agree at {} dB", agree, instances, ebn0_db);
  return res;
}

std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& options) {
  return {
      check_denoiser(1000, 0x5e1fc4ec01, options.corrupt_denoiser),
      check_divergence(1000, 0x5e1fc4ec02),
      check_closed_form(40, 0x5e1fc4ec03),
      check_ml_agreement(200, 0x5e1fc4ec04, 18.0, 3.0, kMlAgreementFloor),
  };
}

}  // namespace rampdet
