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
#include <bit>
#include <cmath>
#include <limits>
#include <set>

#include "doctest.h"
#include "rampdet/constellation.hpp"
#include "rampdet/random.hpp"
#include "rampdet/system.hpp"

using namespace rampdet;

namespace {

double average_energy(const Constellation& c) {
  double e = 0.0;
  for (cplx p : c.points) e += std::norm(p);
  return e / static_cast<double>(c.order());
}

double min_distance(const Constellation& c) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.order(); ++i) {
    for (std::size_t j = i + 1; j < c.order(); ++j) d = std::min(d, std::abs(c.points[i] - c.points[j]));
  }
  return d;
}

}  // namespace

TEST_CASE("qpsk points are the four unit-energy corners") {
  const Constellation c = make_constellation(Modulation::Qpsk);
  REQUIRE(c.order() == 4);
  CHECK(c.bits_per_symbol == 2);
  const double a = 1.0 / std::sqrt(2.0);
  std::set<std::pair<int, int>> signs;
  for (cplx p : c.points) {
    CHECK(std::abs(p) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(std::abs(p.real()) - a) < 1e-15);
    CHECK(std::abs(std::abs(p.imag()) - a) < 1e-15);
    signs.insert({p.real() > 0, p.imag() > 0});
  }
  CHECK(signs.size() == 4);
  CHECK(average_energy(c) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("qam16 sits on {+-1, +-3}/sqrt(10) with unit energy") {
  const Constellation c = make_constellation(Modulation::Qam16);
  REQUIRE(c.order() == 16);
  const double s = 1.0 / std::sqrt(10.0);
  for (cplx p : c.points) {
    for (double x : {p.real(), p.imag()}) {
      const double level = std::abs(x) / s;
      CHECK((std::abs(level - 1.0) < 1e-12 || std::abs(level - 3.0) < 1e-12));
    }
  }
  // (1/16) sum |c|^2 = (2 * (1 + 9) / 10) / 2 = 1
  CHECK(average_energy(c) == doctest::Approx(2.0 * (1.0 + 9.0) / 10.0 / 2.0).epsilon(1e-14));
  CHECK(c.max_magnitude() == doctest::Approx(std::sqrt(18.0 / 10.0)));
}

TEST_CASE("nearest neighbours differ in exactly one bit") {
  for (Modulation m : {Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64}) {
    CAPTURE(to_string(m));
    const Constellation c = make_constellation(m);
    CHECK(average_energy(c) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(c.bits_per_symbol == std::countr_zero(c.order()));
    std::set<std::uint32_t> labels(c.bit_labels.begin(), c.bit_labels.end());
    CHECK(labels.size() == c.order());
    const double d = min_distance(c);
    for (std::size_t i = 0; i < c.order(); ++i) {
      for (std::size_t j = i + 1; j < c.order(); ++j) {
        if (std::abs(std::abs(c.points[i] - c.points[j]) - d) < 1e-9) {
          CHECK(std::popcount(c.bit_labels[i] ^ c.bit_labels[j]) == 1);
        }
      }
    }
  }
}

TEST_CASE("modulation names parse case-insensitively") {
  CHECK(parse_modulation("qpsk") == Modulation::Qpsk);
  CHECK(parse_modulation("QAM16") == Modulation::Qam16);
  CHECK(parse_modulation(to_string(Modulation::Qam64)) == Modulation::Qam64);
  CHECK_THROWS_AS(parse_modulation("8psk"), ConfigError);
}

TEST_CASE("hard decision maps each point to its own label") {
  const Constellation c = make_constellation(Modulation::Qam16);
  CVector s(static_cast<long>(c.order()));
  for (std::size_t i = 0; i < c.order(); ++i) s[static_cast<long>(i)] = c.points[i] * 1.05;
  const HardDecision hd = hard_decision(s, c);
  REQUIRE(hd.bits.size() == c.order() * 4);
  for (std::size_t i = 0; i < c.order(); ++i) {
    CHECK(hd.indices[i] == i);
    std::uint32_t label = 0;
    for (int b = 0; b < 4; ++b) label = (label << 1) | hd.bits[i * 4 + static_cast<std::size_t>(b)];
    CHECK(label == c.bit_labels[i]);
  }
}

TEST_CASE("equidistant estimates resolve to the lowest index") {
  const Constellation c = make_constellation(Modulation::Qpsk);
  CVector zero = CVector::Zero(1);
  CHECK(slice_indices(zero, c)[0] == 0);
  CVector bad(1);
  bad[0] = {std::numeric_limits<double>::quiet_NaN(), 0.0};
  CHECK_THROWS_AS(slice_indices(bad, c), NumericError);
}

TEST_CASE("bit error count is the Hamming distance of the labels") {
  const Constellation c = make_constellation(Modulation::Qam64);
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint32_t> a(20), b(20);
    std::uint64_t expected = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = rng.index(64);
      b[i] = rng.index(64);
      expected += static_cast<std::uint64_t>(std::popcount(c.bit_labels[a[i]] ^ c.bit_labels[b[i]]));
    }
    CHECK(count_bit_errors(c, a, b) == expected);
    CHECK(count_bit_errors(c, a, a) == 0);
  }
}

TEST_CASE("noise variance follows M / (b 10^(x/10))") {
  CHECK(noise_variance_from_ebn0(10.0, 120, 2) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(noise_variance_from_ebn0(0.0, 1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(noise_variance_from_ebn0(20.0, 120, 2) == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("seed derivation is deterministic and path-sensitive") {
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(2, {2, 3}));
  CHECK(derive_seed(1, {}) != derive_seed(1, {0}));
  std::set<std::uint64_t> seen;
  for (std::uint64_t e = 0; e < 8; ++e) {
    for (std::uint64_t t = 0; t < 256; ++t) seen.insert(derive_seed(42, {e, t}));
  }
  CHECK(seen.size() == 8 * 256);
}

TEST_CASE("random streams have the requested moments") {
  Rng rng(7);
  constexpr int kDraws = 200000;
  double sum = 0.0, sum_sq = 0.0, cn = 0.0;
  std::vector<int> counts(5, 0);
  for (int i = 0; i < kDraws; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
    cn += std::norm(rng.complex_normal(0.25));
    const std::uint32_t k = rng.index(5);
    REQUIRE(k < 5);
    ++counts[k];
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  CHECK(std::abs(sum / kDraws) < 0.01);
  CHECK(sum_sq / kDraws == doctest::Approx(1.0).epsilon(0.01));
  CHECK(cn / kDraws == doctest::Approx(0.25).epsilon(0.01));
  for (int c : counts) CHECK(c == doctest::Approx(kDraws / 5.0).epsilon(0.02));
}

TEST_CASE("sampled instances satisfy y = Hs + n with valid symbols") {
  SimConfig cfg;
  cfg.m = 12;
  cfg.n = 9;
  cfg.modulation = Modulation::Qam16;
  const Constellation c = make_constellation(cfg.modulation);
  Rng rng(3);
  const SystemInstance inst = sample_instance(cfg, c, 8.0, rng);
  CHECK(inst.rows() == 9);
  CHECK(inst.cols() == 12);
  CHECK((inst.rx - inst.channel * inst.tx_symbols - inst.noise).norm() < 1e-13);
  CHECK(inst.noise_var == doctest::Approx(noise_variance_from_ebn0(8.0, 12, 4)));
  for (long m = 0; m < inst.cols(); ++m) {
    CHECK(inst.tx_symbols[m] == c.points[inst.tx_indices[static_cast<std::size_t>(m)]]);
  }

  Rng again(3);
  const SystemInstance twin = sample_instance(cfg, c, 8.0, again);
  CHECK(twin.digest() == inst.digest());
  Rng other(4);
  CHECK(sample_instance(cfg, c, 8.0, other).digest() != inst.digest());
}

TEST_CASE("channel entries have unit variance") {
  const Constellation c = make_constellation(Modulation::Qpsk);
  Rng rng(5);
  const SystemInstance inst = sample_instance(400, 300, c, 1.0, rng);
  const double var = inst.channel.squaredNorm() / static_cast<double>(inst.channel.size());
  CHECK(var == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("config validation rejects out-of-range fields") {
  SimConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  auto broken = [](auto mutate) {
    SimConfig c;
    mutate(c);
    return c;
  };
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.m = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.n = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.trials = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.alpha = 0.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.lambda_eff = -1.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.t_max = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.epsilon = 0.0; }).validate(), ConfigError);
}

TEST_CASE("detector names round-trip") {
  for (DetectorId d : {DetectorId::Zf, DetectorId::Lmmse, DetectorId::StandardAmp, DetectorId::Ramp,
                       DetectorId::RobustRamp, DetectorId::IdlsBase, DetectorId::IdlsRobust,
                       DetectorId::Ml}) {
    CHECK(parse_detector(to_string(d)) == d);
  }
  CHECK(parse_detector_list("ramp, lmmse").size() == 2);
  CHECK_THROWS_AS(parse_detector("sphere"), ConfigError);
}

TEST_CASE("hard decision is idempotent on constellation points") {
  for (Modulation mod : {Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64}) {
    const Constellation c = make_constellation(mod);
    Rng rng(12);
    CVector s(40);
    for (long m = 0; m < s.size(); ++m) s[m] = c.points[rng.index(static_cast<std::uint32_t>(c.order()))];
    const auto idx = slice_indices(s, c);
    CVector back(40);
    for (long m = 0; m < s.size(); ++m) back[m] = c.points[idx[static_cast<std::size_t>(m)]];
    CHECK((back.array() == s.array()).all());
    CHECK(slice_indices(back, c) == idx);
  }
}

TEST_CASE("channel and noise draws have the configured power") {
  const Constellation c = make_constellation(Modulation::Qpsk);
  Rng rng(13);
  const SystemInstance inst = sample_instance(1, 100000, c, 6.0, rng);
  CHECK(inst.channel.squaredNorm() / 1e5 == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(inst.noise.squaredNorm() / 1e5 - 6.0) <= 0.15);
}

TEST_CASE("decisions survive perturbations below half the minimum distance") {
  const Constellation c = make_constellation(Modulation::Qam16);
  const double half = 0.5 * min_distance(c);
  Rng rng(14);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint32_t i = rng.index(16);
    const double radius = rng.uniform(0.0, 0.999 * half);
    const double angle = rng.uniform(0.0, 2.0 * M_PI);
    CVector s(1);
    s[0] = c.points[i] + std::polar(radius, angle);
    CHECK(slice_indices(s, c)[0] == i);
  }
  CVector zeros = CVector::Zero(5);
  for (std::uint32_t idx : slice_indices(zeros, make_constellation(Modulation::Qpsk))) CHECK(idx == 0);
}
