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
#include <limits>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "doctest.h"
#include "rampdet/baselines.hpp"
#include "rampdet/idls.hpp"
#include "rampdet/oracle.hpp"
#include "rampdet/system.hpp"
#include "test_support.hpp"

using namespace rampdet;

TEST_CASE("zero forcing inverts a noiseless square channel") {
  const Constellation c = make_constellation(Modulation::Qam16);
  Rng rng(40);
  const SystemInstance inst = sample_instance(8, 8, c, 1e-30, rng);
  const CVector s = zf_detect(inst.channel * inst.tx_symbols, inst.channel);
  CHECK(testing::rel_diff(s, inst.tx_symbols) < 1e-10);
}

TEST_CASE("zero forcing returns the minimum-norm solution when overloaded") {
  Rng rng(41);
  const CMatrix h = testing::random_matrix(rng, 5, 9);
  const CVector y = testing::random_vector(rng, 5);
  const CVector s = zf_detect(y, h);
  const Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
  CHECK(testing::rel_diff(s, svd.solve(y)) < 1e-10);
  CHECK((h * s - y).norm() < 1e-10 * y.norm());
}

TEST_CASE("zero forcing rejects a rank-deficient channel") {
  Rng rng(42);
  CMatrix h = testing::random_matrix(rng, 6, 6);
  h.col(3) = h.col(1) * cplx{2.0, -1.0};
  CHECK_THROWS_AS(zf_detect(testing::random_vector(rng, 6), h), RankDeficientError);
}

TEST_CASE("lmmse matches the push-through form of the estimator") {
  Rng rng(43);
  for (auto [n, m] : {std::pair{6, 10}, std::pair{12, 7}}) {
    const CMatrix h = testing::random_matrix(rng, n, m);
    const CVector y = testing::random_vector(rng, n);
    const double s2 = 0.3;
    CMatrix g = h * h.adjoint();
    g.diagonal().array() += s2;
    const CVector ref = h.adjoint() * g.fullPivLu().solve(y);
    CHECK(testing::rel_diff(lmmse_detect(y, h, s2), ref) < 1e-10);
  }
  CHECK_THROWS_AS(lmmse_detect(CVector::Zero(2), CMatrix::Identity(2, 2), 0.0), NumericError);
}

TEST_CASE("posterior mean agrees with direct Bayes weighting") {
  const Constellation c = make_constellation(Modulation::Qam16);
  Rng rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    const cplx r{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    const double v = rng.uniform(0.05, 2.0);
    long double z = 0, mr = 0, mi = 0, e2 = 0;
    for (cplx p : c.points) {
      const long double w = std::exp(-static_cast<long double>(std::norm(r - p)) / v);
      z += w;
      mr += w * p.real();
      mi += w * p.imag();
      e2 += w * std::norm(p);
    }
    double var = -1.0;
    const cplx mean = posterior_mean(r, v, c, &var);
    CHECK(mean.real() == doctest::Approx(static_cast<double>(mr / z)).epsilon(1e-12));
    CHECK(mean.imag() == doctest::Approx(static_cast<double>(mi / z)).epsilon(1e-12));
    const double ref_var = static_cast<double>(e2 / z - (mr * mr + mi * mi) / (z * z));
    CHECK(var == doctest::Approx(ref_var).epsilon(1e-9));
  }
}

TEST_CASE("posterior mean stays finite at vanishing variance") {
  const Constellation c = make_constellation(Modulation::Qpsk);
  const cplx r = c.points[3] * 1.3;
  double var = -1.0;
  const cplx mean = posterior_mean(r, 1e-9, c, &var);
  CHECK(std::abs(mean - c.points[3]) < 1e-12);
  CHECK(var == doctest::Approx(0.0));
}

TEST_CASE("posterior mean derivative equals posterior variance over v") {
  const Constellation c = make_constellation(Modulation::Qpsk);
  Rng rng(45);
  for (int trial = 0; trial < 50; ++trial) {
    const cplx r{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const double v = rng.uniform(0.1, 1.0);
    double var = 0.0;
    posterior_mean(r, v, c, &var);
    // QPSK separates into Re and Im, so d Re(eta) / d Re(r) = 2 Var[Re s | r] / v.
    const double fd = oracle::central_difference([&](cplx x) { return posterior_mean(x, v, c); }, r, 1e-5);
    const cplx mean = posterior_mean(r, v, c);
    double z = 0.0, var_re = 0.0, var_im = 0.0;
    for (cplx p : c.points) {
      const double w = std::exp(-std::norm(r - p) / v);
      z += w;
      var_re += w * (p.real() - mean.real()) * (p.real() - mean.real());
      var_im += w * (p.imag() - mean.imag()) * (p.imag() - mean.imag());
    }
    var_re /= z;
    var_im /= z;
    CHECK(fd == doctest::Approx(2.0 * var_re / v).epsilon(1e-6));
    // Averaging the two axis derivatives gives the Onsager divergence Var / v.
    CHECK(var_re + var_im == doctest::Approx(var).epsilon(1e-10));
  }
}

TEST_CASE("standard amp recovers symbols of a well-conditioned high-SNR system") {
  SimConfig cfg;
  cfg.m = 16;
  cfg.n = 32;
  const Constellation c = make_constellation(cfg.modulation);
  const DetectorParams params = DetectorParams::from(cfg);
  Rng rng(46);
  for (int trial = 0; trial < 10; ++trial) {
    const SystemInstance inst = sample_instance(cfg, c, 20.0, rng);
    const AmpResult r = standard_amp_detect(inst.rx, inst.channel, inst.noise_var, c, params);
    CHECK_FALSE(r.diverged());
    CHECK(slice_indices(r.s_hat, c) == inst.tx_indices);
  }
}

namespace {

// Counts through all K^M candidates; strict < keeps the first of equal metrics.
double brute_force_best(const CVector& y, const CMatrix& h, const Constellation& c,
                        std::vector<std::uint32_t>& best_idx) {
  const auto m = static_cast<std::size_t>(h.cols());
  const std::size_t k = c.order();
  std::size_t total = 1;
  for (std::size_t j = 0; j < m; ++j) total *= k;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::uint32_t> idx(m);
  CVector s(h.cols());
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    for (std::size_t j = m; j-- > 0;) {
      idx[j] = static_cast<std::uint32_t>(rest % k);
      rest /= k;
      s[static_cast<long>(j)] = c.points[idx[j]];
    }
    const double metric = (y - h * s).squaredNorm();
    if (metric < best) {
      best = metric;
      best_idx = idx;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("ml oracle finds the exhaustive-search minimizer") {
  const Constellation c = make_constellation(Modulation::Qam16);
  Rng rng(47);
  for (int trial = 0; trial < 5; ++trial) {
    const SystemInstance inst = sample_instance(3, 4, c, 0.5, rng);
    std::vector<std::uint32_t> best;
    const double metric = brute_force_best(inst.rx, inst.channel, c, best);
    const MlResult ml = ml_oracle_detect(inst.rx, inst.channel, c);
    CHECK(ml.indices == best);
    CHECK(ml.metric == doctest::Approx(metric).epsilon(1e-12));
    CHECK(slice_indices(ml.s_hat, c) == ml.indices);
  }
}

TEST_CASE("ml ties resolve to the lexicographically smallest candidate") {
  const Constellation c = make_constellation(Modulation::Qpsk);
  const MlResult ml = ml_oracle_detect(CVector::Zero(3), CMatrix::Zero(3, 3), c);
  CHECK(ml.indices == std::vector<std::uint32_t>{0, 0, 0});
}

TEST_CASE("ml refuses searches beyond its limit") {
  const Constellation c = make_constellation(Modulation::Qpsk);
  Rng rng(48);
  CHECK_THROWS_AS(ml_oracle_detect(testing::random_vector(rng, 11), testing::random_matrix(rng, 11, 11), c),
                  Error);
}

TEST_CASE("lmmse with an identity channel scales each observation") {
  Rng rng(49);
  const CVector y = testing::random_vector(rng, 5);
  CHECK(testing::rel_diff(lmmse_detect(y, CMatrix::Identity(5, 5), 0.25), y / 1.25) < 1e-15);
}

TEST_CASE("posterior mean stays inside the constellation hull") {
  const Constellation c = make_constellation(Modulation::Qam16);
  Rng rng(50);
  for (int trial = 0; trial < 1000; ++trial) {
    const cplx r = rng.complex_normal(rng.uniform(0.1, 25.0));
    CHECK(std::abs(posterior_mean(r, rng.uniform(1e-6, 10.0), c)) <= c.max_magnitude() * (1.0 + 1e-14));
  }
  const Constellation q = make_constellation(Modulation::Qpsk);
  CHECK(std::abs(posterior_mean({0.0, 0.0}, 0.7, q)) < 1e-16);
}

TEST_CASE("ml estimate beats random candidates") {
  const Constellation c = make_constellation(Modulation::Qpsk);
  Rng rng(51);
  for (int trial = 0; trial < 5; ++trial) {
    const SystemInstance inst = sample_instance(6, 6, c, 0.3, rng);
    const MlResult ml = ml_oracle_detect(inst.rx, inst.channel, c);
    CHECK(ml.metric == doctest::Approx((inst.rx - inst.channel * ml.s_hat).squaredNorm()));
    for (int k = 0; k < 100; ++k) {
      CVector s(6);
      for (long m = 0; m < 6; ++m) s[m] = c.points[rng.index(4)];
      CHECK(ml.metric <= (inst.rx - inst.channel * s).squaredNorm());
    }
  }
}

TEST_CASE("lmmse agrees with regularization-free robust idls") {
  const Constellation c = make_constellation(Modulation::Qam16);
  Rng rng(52);
  const SystemInstance inst = sample_instance(9, 7, c, 0.4, rng);
  const BetaWeights beta = compute_beta_weights(CVector::Zero(9), c, 0.1);
  const CVector idls = idls_solve_step(inst.rx, inst.channel, beta, 0.0, inst.noise_var, Variant::Robust);
  CHECK(testing::rel_diff(lmmse_detect(inst.rx, inst.channel, inst.noise_var), idls) < 1e-10);
}

TEST_CASE("zero forcing reference cases for wide channels") {
  const Constellation c = make_constellation(Modulation::Qpsk);
  Rng rng(53);
  const SystemInstance inst = sample_instance(9, 5, c, 1e-30, rng);
  const CVector y = inst.channel * inst.tx_symbols;
  const CVector s = zf_detect(y, inst.channel);
  CHECK((y - inst.channel * s).norm() <= 1e-10 * y.norm());
  CHECK((s - inst.tx_symbols).norm() > 1e-3);

  // Orthonormal rows: the pseudo-inverse is the adjoint.
  const Eigen::HouseholderQR<CMatrix> qr(testing::random_matrix(rng, 9, 9));
  const CMatrix q = CMatrix(qr.householderQ()).topRows(5);
  const CVector yq = testing::random_vector(rng, 5);
  CHECK(testing::rel_diff(zf_detect(yq, q), q.adjoint() * yq) < 1e-12);
}

TEST_CASE("lmmse approaches zero forcing as the noise vanishes") {
  Rng rng(54);
  const CMatrix h = testing::random_matrix(rng, 6, 6);
  const CVector y = testing::random_vector(rng, 6);
  CHECK(testing::rel_diff(lmmse_detect(y, h, 1e-12), zf_detect(y, h)) < 1e-6);
}

TEST_CASE("ml reference cases") {
  const Constellation c = make_constellation(Modulation::Qam16);
  Rng rng(55);
  const SystemInstance inst = sample_instance(3, 5, c, 1.0, rng);
  const MlResult exact = ml_oracle_detect(inst.channel * inst.tx_symbols, inst.channel, c);
  CHECK(exact.indices == inst.tx_indices);

  // M = 1 with a unit-norm column: ML is the slicer applied to h^H y.
  CMatrix h = testing::random_matrix(rng, 4, 1);
  h /= h.norm();
  for (int trial = 0; trial < 50; ++trial) {
    const CVector y = h * c.points[rng.index(16)] + testing::random_vector(rng, 4, 0.3);
    CHECK(ml_oracle_detect(y, h, c).indices == slice_indices(h.adjoint() * y, c));
  }
}
