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
#include <functional>
#include <vector>

#include "rampdet/analysis.hpp"
#include "rampdet/constellation.hpp"
#include "rampdet/detector_params.hpp"
#include "rampdet/op_counter.hpp"
#include "rampdet/system.hpp"

namespace rampdet {

struct RunOptions {
  int threads = 1;
  /// Called once per (detector, Eb/N0 index, trial) with the instance digest.
  std::function<void(DetectorId, int, int, std::uint64_t)> on_instance;
};

struct RunResult {
  std::uint64_t config_digest = 0;
  DetectorId detector = DetectorId::Ramp;
  int m = 0;
  int n = 0;
  Modulation modulation = Modulation::Qpsk;
  double ebn0_db = 0.0;
  int trials = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t total_bits = 0;
  double ber = 0.0;
  double avg_iterations = 0.0;
  int divergence_failures = 0;
  double wall_time_s = 0.0;
  std::uint64_t op_count = 0;  // mean complex MACs per detection
};

struct DetectionOutcome {
  CVector s_hat;
  int iterations = 0;
  bool failed = false;
};

DetectionOutcome run_detector(DetectorId id, const SystemInstance& inst, const Constellation& c,
                              const DetectorParams& params, OpCounter* ops = nullptr);

/// Runs trials in [0, trials) on up to `threads` workers; f(trial) must only
/// touch state owned by that trial.
void parallel_trials(int trials, int threads, const std::function<void(int)>& f);

std::vector<RunResult> run_ber_sweep(const SimConfig& cfg, const RunOptions& options = {});

struct ConvergencePoint {
  int t = 0;
  double ber = 0.0;
  double mean_eps = 0.0;
  double converged_fraction = 0.0;  // trials with eps < epsilon at some t' <= t
};

struct ConvergenceTrace {
  DetectorId detector = DetectorId::RobustRamp;
  double ebn0_db = 0.0;
  int trials = 0;
  bool early_stop = false;
  std::vector<ConvergencePoint> points;
  std::vector<int> first_converged;  // per trial, 0 when never below epsilon
  RunResult final;
};

/// Per-iteration BER and eps_t averaged over trials for t = 1..t_max.
/// Trials that stop early (early_stop = true) carry their final estimate forward.
ConvergenceTrace run_convergence_trace(const SimConfig& cfg, double ebn0_db,
                                       DetectorId detector = DetectorId::RobustRamp,
                                       bool early_stop = false, const RunOptions& options = {});

struct SeRow {
  int step = 0;
  double predicted = 0.0;
  double genie_empirical = 0.0;
  double genie_v = 0.0;
  double genie_mse = 0.0;
  double state_empirical = 0.0;
  double state_v = 0.0;
  double state_mse = 0.0;
  double deviation = 0.0;  // |state_empirical - predicted| / predicted
};

struct SeComparison {
  double ebn0_db = 0.0;
  double sigma_n2 = 0.0;  // noise variance on the normalized channel
  SeTrace prediction;
  std::vector<SeRow> rows;
  RunResult genie_result;
  RunResult state_result;
};

/// SE step k is compared with the effective observation of iteration k + 2:
/// iteration 1 runs on the zero residual and iteration 2 sees r = H^H y.
SeComparison run_se_comparison(const SimConfig& cfg, double ebn0_db, int steps,
                               Variant variant = Variant::Base,
                               const RunOptions& options = {});

struct QqExperiment {
  double ebn0_db = 0.0;
  int at_iter = 0;
  QqDiagnostic state_dependent;
  QqDiagnostic genie;
  RunResult state_result;
  RunResult genie_result;
};

QqExperiment run_qq_experiment(const SimConfig& cfg, double ebn0_db, int at_iter,
                               Variant variant = Variant::Base,
                               const RunOptions& options = {});

struct OpCount {
  DetectorId detector = DetectorId::Ramp;
  int m = 0;
  int n = 0;
  int iterations = 0;
  std::uint64_t per_iteration = 0;
  std::uint64_t setup = 0;
};

/// Instrumented single run with early stopping disabled.
OpCount count_ops(DetectorId detector, const SimConfig& cfg, int iterations);

}  // namespace rampdet
