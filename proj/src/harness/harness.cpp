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

#include "rampdet/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rampdet/baselines.hpp"
#include "rampdet/config.hpp"
#include "rampdet/idls.hpp"
#include "rampdet/ramp.hpp"

namespace rampdet {

namespace {

using Clock = std::chrono::steady_clock;

Rng trial_stream(const SimConfig& cfg, std::size_t ebn0_index, int trial) {
  return Rng::substream(cfg.seed, {ebn0_index, static_cast<std::uint64_t>(trial)});
}

std::uint64_t symbol_bits(const SimConfig& cfg, const Constellation& c) {
  return static_cast<std::uint64_t>(cfg.m) * static_cast<std::uint64_t>(c.bits_per_symbol);
}

std::uint64_t errors_of(const CVector& s_hat, const SystemInstance& inst, const Constellation& c) {
  const auto detected = slice_indices(s_hat, c);
  return count_bit_errors(c, detected, inst.tx_indices);
}

RunResult make_result(const SimConfig& cfg, DetectorId d, double ebn0_db, int trials,
                      std::uint64_t bit_errors, std::uint64_t total_bits) {
  RunResult r;
  r.config_digest = config_digest(cfg);
  r.detector = d;
  r.m = cfg.m;
  r.n = cfg.n;
  r.modulation = cfg.modulation;
  r.ebn0_db = ebn0_db;
  r.trials = trials;
  r.bit_errors = bit_errors;
  r.total_bits = total_bits;
  r.ber = total_bits ? static_cast<double>(bit_errors) / static_cast<double>(total_bits) : 0.0;
  return r;
}

Variant variant_of(DetectorId d) {
  switch (d) {
    case DetectorId::Ramp:
      return Variant::Base;
    case DetectorId::RobustRamp:
      return Variant::Robust;
    default:
      throw ConfigError("detector '" + std::string(to_string(d)) +
                        "' has no per-iteration trace; use ramp or robust-ramp");
  }
}

}  // namespace

void parallel_trials(int trials, int threads, const std::function<void(int)>& f) {
  if (threads <= 1 || trials <= 1) {
    for (int t = 0; t < trials; ++t) f(t);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  const int workers = std::min(threads, trials);
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int t = next++; t < trials; t = next++) {
        try {
          f(t);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

DetectionOutcome run_detector(DetectorId id, const SystemInstance& inst, const Constellation& c,
                              const DetectorParams& params, OpCounter* ops) {
  DetectionOutcome out;
  const CMatrix& h = inst.channel;
  const CVector& y = inst.rx;
  try {
    switch (id) {
      case DetectorId::Zf:
        out.s_hat = zf_detect(y, h);
        break;
      case DetectorId::Lmmse:
        out.s_hat = lmmse_detect(y, h, inst.noise_var);
        break;
      case DetectorId::StandardAmp: {
        AmpResult r = standard_amp_detect(y, h, inst.noise_var, c, params, ops);
        out.iterations = r.state.iter;
        out.failed = r.diverged();
        out.s_hat = std::move(r.s_hat);
        break;
      }
      case DetectorId::Ramp:
      case DetectorId::RobustRamp: {
        RampOptions opt;
        opt.variant = variant_of(id);
        opt.ops = ops;
        AmpResult r = ramp_detect(y, h, inst.noise_var, c, params, opt);
        out.iterations = r.state.iter;
        out.failed = r.diverged();
        out.s_hat = std::move(r.s_hat);
        break;
      }
      case DetectorId::IdlsBase:
      case DetectorId::IdlsRobust: {
        const Variant v = id == DetectorId::IdlsBase ? Variant::Base : Variant::Robust;
        IdlsResult r = idls_detect(y, h, inst.noise_var, c, params, v, ops);
        out.iterations = r.iterations;
        out.s_hat = std::move(r.s_hat);
        break;
      }
      case DetectorId::Ml:
        out.s_hat = ml_oracle_detect(y, h, c).s_hat;
        break;
    }
  } catch (const NumericError&) {
    out.failed = true;
  }
  if (!out.failed) {
    for (Eigen::Index m = 0; m < out.s_hat.size(); ++m) {
      if (!std::isfinite(out.s_hat[m].real()) || !std::isfinite(out.s_hat[m].imag())) {
        out.failed = true;
        break;
      }
    }
  }
  if (out.failed) out.s_hat = CVector::Zero(h.cols());
  return out;
}

std::vector<RunResult> run_ber_sweep(const SimConfig& cfg, const RunOptions& options) {
  cfg.validate();
  const Constellation c = make_constellation(cfg.modulation);
  const DetectorParams params = DetectorParams::from(cfg);
  const std::size_t detectors = cfg.detectors.size();
  const std::uint64_t bits_per_trial = symbol_bits(cfg, c);

  struct Tally {
    std::uint64_t errors = 0;
    int iterations = 0;
    bool failed = false;
    std::uint64_t ops = 0;
    double seconds = 0.0;
  };

  // results[d * grid + e]
  std::vector<RunResult> results(detectors * cfg.ebn0_db_grid.size());
  std::mutex observer_mutex;
  for (std::size_t e = 0; e < cfg.ebn0_db_grid.size(); ++e) {
    const double ebn0 = cfg.ebn0_db_grid[e];
    std::vector<Tally> tallies(static_cast<std::size_t>(cfg.trials) * detectors);
    parallel_trials(cfg.trials, options.threads, [&](int trial) {
      Rng rng = trial_stream(cfg, e, trial);
      const SystemInstance inst = sample_instance(cfg, c, ebn0, rng);
      const std::uint64_t digest = options.on_instance ? inst.digest() : 0;
      for (std::size_t d = 0; d < detectors; ++d) {
        OpCounter ops;
        const auto start = Clock::now();
        const DetectionOutcome o = run_detector(cfg.detectors[d], inst, c, params, &ops);
        Tally& t = tallies[static_cast<std::size_t>(trial) * detectors + d];
        t.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        t.failed = o.failed;
        t.iterations = o.iterations;
        t.errors = o.failed ? bits_per_trial : errors_of(o.s_hat, inst, c);
        t.ops = ops.setup + ops.iterative;
        if (options.on_instance) {
          std::lock_guard lock(observer_mutex);
          options.on_instance(cfg.detectors[d], static_cast<int>(e), trial, digest);
        }
      }
    });

    for (std::size_t d = 0; d < detectors; ++d) {
      std::uint64_t errors = 0;
      std::uint64_t iterations = 0;
      std::uint64_t ops = 0;
      int failures = 0;
      double seconds = 0.0;
      for (int trial = 0; trial < cfg.trials; ++trial) {
        const Tally& t = tallies[static_cast<std::size_t>(trial) * detectors + d];
        errors += t.errors;
        iterations += static_cast<std::uint64_t>(t.iterations);
        ops += t.ops;
        failures += t.failed ? 1 : 0;
        seconds += t.seconds;
      }
      RunResult r = make_result(cfg, cfg.detectors[d], ebn0, cfg.trials, errors,
                                bits_per_trial * static_cast<std::uint64_t>(cfg.trials));
      r.avg_iterations = static_cast<double>(iterations) / cfg.trials;
      r.divergence_failures = failures;
      r.op_count = ops / static_cast<std::uint64_t>(cfg.trials);
      r.wall_time_s = seconds;
      results[d * cfg.ebn0_db_grid.size() + e] = r;
    }
  }
  return results;
}

ConvergenceTrace run_convergence_trace(const SimConfig& cfg, double ebn0_db, DetectorId detector,
                                       bool early_stop, const RunOptions& options) {
  cfg.validate();
  const Constellation c = make_constellation(cfg.modulation);
  DetectorParams params = DetectorParams::from(cfg);
  params.early_stop = early_stop;
  const Variant variant = variant_of(detector);
  const auto t_max = static_cast<std::size_t>(cfg.t_max);
  const std::uint64_t bits_per_trial = symbol_bits(cfg, c);

  struct TrialTrace {
    std::vector<std::uint64_t> errors;
    std::vector<double> eps;
    int first_converged = 0;
    bool failed = false;
    int iterations = 0;
  };
  std::vector<TrialTrace> traces(static_cast<std::size_t>(cfg.trials));

  parallel_trials(cfg.trials, options.threads, [&](int trial) {
    Rng rng = trial_stream(cfg, 0, trial);
    const SystemInstance inst = sample_instance(cfg, c, ebn0_db, rng);
    RampOptions opt;
    opt.variant = variant;
    opt.record_estimates = true;
    const AmpResult r = ramp_detect(inst.rx, inst.channel, inst.noise_var, c, params, opt);

    TrialTrace& tt = traces[static_cast<std::size_t>(trial)];
    tt.errors.assign(t_max, bits_per_trial);
    tt.eps.assign(t_max, 0.0);
    tt.failed = r.diverged();
    tt.iterations = r.state.iter;
    for (std::size_t t = 0; t < r.estimates.size(); ++t) {
      tt.errors[t] = errors_of(r.estimates[t], inst, c);
      tt.eps[t] = r.state.trace[t].eps;
      if (tt.first_converged == 0 && t >= 1 && tt.eps[t] < cfg.epsilon) {
        tt.first_converged = static_cast<int>(t + 1);
      }
    }
    // A stopped estimate no longer moves; a diverged one keeps every bit in error.
    if (!tt.failed) {
      for (std::size_t t = r.estimates.size(); t < t_max && !r.estimates.empty(); ++t) {
        tt.errors[t] = tt.errors[r.estimates.size() - 1];
      }
    }
  });

  ConvergenceTrace out;
  out.detector = detector;
  out.ebn0_db = ebn0_db;
  out.trials = cfg.trials;
  out.early_stop = early_stop;
  const double total_bits = static_cast<double>(bits_per_trial) * cfg.trials;
  for (std::size_t t = 0; t < t_max; ++t) {
    ConvergencePoint p;
    p.t = static_cast<int>(t + 1);
    std::uint64_t errors = 0;
    double eps_sum = 0.0;
    int eps_count = 0;
    int converged = 0;
    for (const TrialTrace& tt : traces) {
      errors += tt.errors[t];
      if (!tt.failed) {
        eps_sum += tt.eps[t];
        ++eps_count;
      }
      if (tt.first_converged > 0 && tt.first_converged <= p.t) ++converged;
    }
    p.ber = static_cast<double>(errors) / total_bits;
    p.mean_eps = eps_count ? eps_sum / eps_count : 0.0;
    p.converged_fraction = static_cast<double>(converged) / cfg.trials;
    out.points.push_back(p);
  }
  std::uint64_t final_errors = 0;
  std::uint64_t iterations = 0;
  int failures = 0;
  for (const TrialTrace& tt : traces) {
    out.first_converged.push_back(tt.first_converged);
    final_errors += tt.errors.back();
    iterations += static_cast<std::uint64_t>(tt.iterations);
    failures += tt.failed ? 1 : 0;
  }
  out.final = make_result(cfg, detector, ebn0_db, cfg.trials, final_errors,
                          bits_per_trial * static_cast<std::uint64_t>(cfg.trials));
  out.final.avg_iterations = static_cast<double>(iterations) / cfg.trials;
  out.final.divergence_failures = failures;
  return out;
}

SeComparison run_se_comparison(const SimConfig& cfg, double ebn0_db, int steps, Variant variant,
                               const RunOptions& options) {
  cfg.validate();
  if (steps < 0) throw ConfigError("se comparison: steps must be >= 0");
  const Constellation c = make_constellation(cfg.modulation);
  DetectorParams params = DetectorParams::from(cfg);
  params.early_stop = false;
  params.t_max = steps + 2;
  const std::uint64_t bits_per_trial = symbol_bits(cfg, c);
  const DetectorId id = variant == Variant::Base ? DetectorId::Ramp : DetectorId::RobustRamp;

  SeComparison out;
  out.ebn0_db = ebn0_db;
  out.sigma_n2 = noise_variance_from_ebn0(ebn0_db, cfg.m, c.bits_per_symbol) / cfg.n;
  out.prediction = se_recursion(cfg, out.sigma_n2, steps, variant);

  struct TrialRecords {
    std::vector<IterationRecord> genie;
    std::vector<IterationRecord> state;
    std::uint64_t genie_errors = 0;
    std::uint64_t state_errors = 0;
  };
  std::vector<TrialRecords> records(static_cast<std::size_t>(cfg.trials));
  parallel_trials(cfg.trials, options.threads, [&](int trial) {
    Rng rng = trial_stream(cfg, 0, trial);
    const SystemInstance inst = sample_instance(cfg, c, ebn0_db, rng);
    RampOptions opt;
    opt.variant = variant;
    opt.reference = &inst.tx_symbols;
    const AmpResult state = ramp_detect(inst.rx, inst.channel, inst.noise_var, c, params, opt);
    opt.genie_symbols = &inst.tx_symbols;
    const AmpResult genie = ramp_detect(inst.rx, inst.channel, inst.noise_var, c, params, opt);
    TrialRecords& tr = records[static_cast<std::size_t>(trial)];
    tr.state = state.state.trace;
    tr.genie = genie.state.trace;
    tr.state_errors = state.diverged() ? bits_per_trial : errors_of(state.s_hat, inst, c);
    tr.genie_errors = genie.diverged() ? bits_per_trial : errors_of(genie.s_hat, inst, c);
  });

  std::uint64_t genie_errors = 0;
  std::uint64_t state_errors = 0;
  for (const TrialRecords& tr : records) {
    genie_errors += tr.genie_errors;
    state_errors += tr.state_errors;
  }
  for (int k = 0; k <= steps; ++k) {
    const auto idx = static_cast<std::size_t>(k + 1);  // iteration k + 2
    SeRow row;
    row.step = k;
    row.predicted = out.prediction.sigma2_seq[static_cast<std::size_t>(k)];
    int count = 0;
    for (const TrialRecords& tr : records) {
      if (tr.genie.size() <= idx || tr.state.size() <= idx) continue;
      row.genie_empirical += tr.genie[idx].effective_var.value_or(0.0);
      row.genie_v += tr.genie[idx].v;
      row.genie_mse += tr.genie[idx].mse.value_or(0.0);
      row.state_empirical += tr.state[idx].effective_var.value_or(0.0);
      row.state_v += tr.state[idx].v;
      row.state_mse += tr.state[idx].mse.value_or(0.0);
      ++count;
    }
    if (count > 0) {
      row.genie_empirical /= count;
      row.genie_v /= count;
      row.genie_mse /= count;
      row.state_empirical /= count;
      row.state_v /= count;
      row.state_mse /= count;
    }
    row.deviation = std::abs(row.state_empirical - row.predicted) / row.predicted;
    out.prediction.empirical_mse_seq.push_back(row.genie_mse);
    out.rows.push_back(row);
  }
  const std::uint64_t total = bits_per_trial * static_cast<std::uint64_t>(cfg.trials);
  out.genie_result = make_result(cfg, id, ebn0_db, cfg.trials, genie_errors, total);
  out.state_result = make_result(cfg, id, ebn0_db, cfg.trials, state_errors, total);
  out.genie_result.avg_iterations = out.state_result.avg_iterations = params.t_max;
  return out;
}

QqExperiment run_qq_experiment(const SimConfig& cfg, double ebn0_db, int at_iter, Variant variant,
                               const RunOptions& options) {
  cfg.validate();
  if (at_iter < 2) throw ConfigError("qq experiment: at_iter must be >= 2");
  const Constellation c = make_constellation(cfg.modulation);
  DetectorParams params = DetectorParams::from(cfg);
  params.early_stop = false;
  params.t_max = at_iter;
  const std::uint64_t bits_per_trial = symbol_bits(cfg, c);
  const DetectorId id = variant == Variant::Base ? DetectorId::Ramp : DetectorId::RobustRamp;

  struct TrialSamples {
    std::vector<double> state;
    std::vector<double> genie;
    std::uint64_t state_errors = 0;
    std::uint64_t genie_errors = 0;
  };
  std::vector<TrialSamples> per_trial(static_cast<std::size_t>(cfg.trials));
  parallel_trials(cfg.trials, options.threads, [&](int trial) {
    Rng rng = trial_stream(cfg, 0, trial);
    const SystemInstance inst = sample_instance(cfg, c, ebn0_db, rng);
    RampOptions opt;
    opt.variant = variant;
    opt.capture_iterations = {at_iter};
    const AmpResult state = ramp_detect(inst.rx, inst.channel, inst.noise_var, c, params, opt);
    opt.genie_symbols = &inst.tx_symbols;
    const AmpResult genie = ramp_detect(inst.rx, inst.channel, inst.noise_var, c, params, opt);
    TrialSamples& ts = per_trial[static_cast<std::size_t>(trial)];
    if (!state.captures.empty()) {
      append_normalized_errors(state.captures.front().r, inst.tx_symbols, state.captures.front().v,
                               ts.state);
    }
    if (!genie.captures.empty()) {
      append_normalized_errors(genie.captures.front().r, inst.tx_symbols, genie.captures.front().v,
                               ts.genie);
    }
    ts.state_errors = state.diverged() ? bits_per_trial : errors_of(state.s_hat, inst, c);
    ts.genie_errors = genie.diverged() ? bits_per_trial : errors_of(genie.s_hat, inst, c);
  });

  std::vector<double> state_samples;
  std::vector<double> genie_samples;
  std::uint64_t state_errors = 0;
  std::uint64_t genie_errors = 0;
  for (const TrialSamples& ts : per_trial) {
    state_samples.insert(state_samples.end(), ts.state.begin(), ts.state.end());
    genie_samples.insert(genie_samples.end(), ts.genie.begin(), ts.genie.end());
    state_errors += ts.state_errors;
    genie_errors += ts.genie_errors;
  }
  QqExperiment out;
  out.ebn0_db = ebn0_db;
  out.at_iter = at_iter;
  out.state_dependent = qq_diagnostic(state_samples);
  out.genie = qq_diagnostic(genie_samples);
  const std::uint64_t total = bits_per_trial * static_cast<std::uint64_t>(cfg.trials);
  out.state_result = make_result(cfg, id, ebn0_db, cfg.trials, state_errors, total);
  out.genie_result = make_result(cfg, id, ebn0_db, cfg.trials, genie_errors, total);
  out.state_result.avg_iterations = out.genie_result.avg_iterations = at_iter;
  return out;
}

OpCount count_ops(DetectorId detector, const SimConfig& cfg, int iterations) {
  OpCount out;
  out.detector = detector;
  out.m = cfg.m;
  out.n = cfg.n;
  if (iterations <= 0) return out;
  cfg.validate();
  const Constellation c = make_constellation(cfg.modulation);
  DetectorParams params = DetectorParams::from(cfg);
  params.t_max = iterations;
  params.early_stop = false;
  Rng rng = trial_stream(cfg, 0, 0);
  const SystemInstance inst = sample_instance(cfg, c, cfg.ebn0_db_grid.front(), rng);
  OpCounter ops;
  run_detector(detector, inst, c, params, &ops);
  out.iterations = ops.iterations;
  out.per_iteration = ops.per_iteration();
  out.setup = ops.setup;
  return out;
}

}  // namespace rampdet
