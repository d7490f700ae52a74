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

// rampdet command-line front end.
//
//   rampdet ber       --config configs/desk.cfg --out results/
//   rampdet converge  --ebn0 10 --no-early-stop
//   rampdet se        --ebn0 10 --genie
//   rampdet qq        --ebn0 10 --at-iter 15
//   rampdet selfcheck --verbose
//   rampdet opcount   --iterations 10
//
// Exit status: 0 success, 1 usage or config error, 2 runtime failure,
// 3 selfcheck failure.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "rampdet/config.hpp"
#include "rampdet/harness.hpp"
#include "rampdet/io.hpp"
#include "rampdet/oracle.hpp"

namespace fs = std::filesystem;
using namespace rampdet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitSelfcheck = 3;

struct Common {
  std::string config_path;
  std::string out_dir = "results";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string detectors;
  std::string ebn0;
  std::optional<int> trials;
  int threads = 1;
  bool verbose = false;
  bool timing = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "Config file (key = value lines)");
  cmd->add_option("--out", c.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--set", c.overrides, "Override a config field, key=value (repeatable)");
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--detectors", c.detectors, "Comma-separated detector list");
  cmd->add_option("--ebn0", c.ebn0, "Eb/N0 in dB, single value or comma list");
  cmd->add_option("--trials", c.trials, "Trials per Eb/N0 point");
  cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--verbose", c.verbose, "Print extra detail");
  cmd->add_flag("--timing", c.timing, "Fill wall_time_s in the CSV (breaks byte reproducibility)");
}

SimConfig effective_config(const Common& c) {
  SimConfig cfg = c.config_path.empty() ? SimConfig{} : load_config(c.config_path);
  for (const std::string& kv : c.overrides) apply_override(cfg, kv);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.detectors.empty()) set_field(cfg, "detectors", c.detectors);
  if (!c.ebn0.empty()) set_field(cfg, "ebn0_db_grid", c.ebn0);
  if (c.trials) cfg.trials = *c.trials;
  cfg.validate();
  return cfg;
}

void emit(const Common& c, const std::string& name, const std::string& csv,
          const nlohmann::json& json) {
  const fs::path dir(c.out_dir);
  write_file(dir / (name + ".csv"), csv);
  write_file(dir / (name + ".json"), json.dump(2) + "\n");
  if (c.verbose) fmt::print("wrote {} and {}\n", (dir / (name + ".csv")).string(),
                            (dir / (name + ".json")).string());
}

void print_results(const std::vector<RunResult>& results) {
  fmt::print("{:<13} {:>8} {:>7} {:>12} {:>12} {:>9} {:>5}\n", "detector", "ebn0_db", "trials",
             "bit_errors", "ber", "avg_iter", "div");
  for (const RunResult& r : results) {
    fmt::print("{:<13} {:>8} {:>7} {:>12} {:>12.4e} {:>9.2f} {:>5}\n", to_string(r.detector),
               r.ebn0_db, r.trials, r.bit_errors, r.ber, r.avg_iterations, r.divergence_failures);
  }
}

Variant single_variant(const SimConfig& cfg) {
  if (cfg.detectors.size() != 1) {
    throw ConfigError("this command takes exactly one detector (ramp or robust-ramp)");
  }
  if (cfg.detectors[0] == DetectorId::Ramp) return Variant::Base;
  if (cfg.detectors[0] == DetectorId::RobustRamp) return Variant::Robust;
  throw ConfigError("this command supports only ramp or robust-ramp");
}

RunOptions run_options(const Common& c) {
  RunOptions opts;
  opts.threads = c.threads;
  return opts;
}

int cmd_ber(const Common& c) {
  const SimConfig cfg = effective_config(c);
  const auto results = run_ber_sweep(cfg, run_options(c));
  nlohmann::json records = nlohmann::json::array();
  for (const RunResult& r : results) records.push_back(to_json(r));
  emit(c, "ber", results_csv(cfg, results, c.timing), sidecar(cfg, records));
  print_results(results);
  return kExitOk;
}

int cmd_converge(const Common& c, bool early_stop) {
  SimConfig cfg = effective_config(c);
  std::vector<RunResult> finals;
  nlohmann::json records = nlohmann::json::array();
  for (DetectorId d : cfg.detectors) {
    for (double ebn0 : cfg.ebn0_db_grid) {
      const ConvergenceTrace trace = run_convergence_trace(cfg, ebn0, d, early_stop,
                                                           run_options(c));
      finals.push_back(trace.final);
      records.push_back(to_json(trace));
      if (c.verbose) {
        for (const ConvergencePoint& p : trace.points) {
          fmt::print("{} {} dB t={:>3} ber={:.4e} eps={:.3e} converged={:.3f}\n", to_string(d),
                     ebn0, p.t, p.ber, p.mean_eps, p.converged_fraction);
        }
      }
    }
  }
  emit(c, "converge", results_csv(cfg, finals, c.timing), sidecar(cfg, records));
  print_results(finals);
  return kExitOk;
}

int cmd_se(const Common& c, int steps, bool genie) {
  const SimConfig cfg = effective_config(c);
  const Variant variant = single_variant(cfg);
  std::vector<RunResult> rows;
  nlohmann::json records = nlohmann::json::array();
  for (double ebn0 : cfg.ebn0_db_grid) {
    const SeComparison se = run_se_comparison(cfg, ebn0, steps, variant, run_options(c));
    rows.push_back(genie ? se.genie_result : se.state_result);
    nlohmann::json rec = to_json(se);
    rec["compared_run"] = genie ? "genie" : "state_dependent";
    records.push_back(std::move(rec));
    fmt::print("{} dB ({} run)\n{:>4} {:>12} {:>12} {:>10}\n", ebn0,
               genie ? "genie" : "state-dependent", "step", "predicted", "empirical", "rel_dev");
    for (const SeRow& r : se.rows) {
      const double emp = genie ? r.genie_empirical : r.state_empirical;
      fmt::print("{:>4} {:>12.5e} {:>12.5e} {:>10.4f}\n", r.step, r.predicted, emp,
                 std::abs(emp - r.predicted) / r.predicted);
    }
  }
  emit(c, "se", results_csv(cfg, rows, c.timing), sidecar(cfg, records));
  return kExitOk;
}

int cmd_qq(const Common& c, int at_iter) {
  const SimConfig cfg = effective_config(c);
  const Variant variant = single_variant(cfg);
  std::vector<RunResult> rows;
  nlohmann::json records = nlohmann::json::array();
  std::string quantiles;
  for (double ebn0 : cfg.ebn0_db_grid) {
    const QqExperiment q = run_qq_experiment(cfg, ebn0, at_iter, variant, run_options(c));
    rows.push_back(q.state_result);
    rows.push_back(q.genie_result);
    records.push_back(to_json(q));
    const std::string table = qq_csv(cfg, q);
    quantiles += table;
    write_file(fs::path(c.out_dir) / fmt::format("qq_quantiles_{}dB.csv", ebn0), table);
    fmt::print("{} dB, iteration {}: KS state-dependent = {:.5f}, KS genie = {:.5f}\n", ebn0,
               at_iter, q.state_dependent.ks_stat, q.genie.ks_stat);
  }
  emit(c, "qq", results_csv(cfg, rows, c.timing), sidecar(cfg, records));
  return kExitOk;
}

int cmd_selfcheck(bool verbose, bool corrupt) {
  SelfcheckOptions opts;
  opts.corrupt_denoiser = corrupt;
  bool all = true;
  for (const CheckResult& r : run_selfcheck(opts)) {
    all = all && r.passed;
    fmt::print("{} {}\n", r.passed ? "PASS" : "FAIL", r.name);
    if (verbose) {
      fmt::print("     tolerance {:.3e}, observed {:.3e}\n     {}\n", r.tolerance, r.observed,
                 r.detail);
    }
  }
  return all ? kExitOk : kExitSelfcheck;
}

int cmd_opcount(const Common& c, int iterations) {
  const SimConfig cfg = effective_config(c);
  std::string csv = fmt::format("# config_digest={} seed={}\n", digest_hex(config_digest(cfg)),
                                cfg.seed);
  csv += "detector,m,n,iterations,per_iteration,setup\n";
  nlohmann::json records = nlohmann::json::array();
  for (DetectorId d : cfg.detectors) {
    const OpCount oc = count_ops(d, cfg, iterations);
    csv += fmt::format("{},{},{},{},{},{}\n", to_string(d), oc.m, oc.n, oc.iterations,
                       oc.per_iteration, oc.setup);
    records.push_back({{"detector", std::string(to_string(d))},
                       {"m", oc.m},
                       {"n", oc.n},
                       {"iterations", oc.iterations},
                       {"per_iteration", oc.per_iteration},
                       {"setup", oc.setup}});
    fmt::print("{:<13} M={} N={} per-iteration={} setup={}\n", to_string(d), oc.m, oc.n,
               oc.per_iteration, oc.setup);
  }
  emit(c, "opcount", csv, sidecar(cfg, records));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized AMP and IDLS MIMO detection experiments"};
  app.require_subcommand(1);

  Common common;
  bool no_early_stop = false;
  bool genie = false;
  int se_steps = 10;
  int at_iter = 15;
  int op_iterations = 10;
  bool corrupt = false;

  auto* ber = app.add_subcommand("ber", "BER sweep over the Eb/N0 grid");
  add_common(ber, common);

  auto* converge = app.add_subcommand("converge", "Per-iteration BER and stopping statistics");
  add_common(converge, common);
  converge->add_flag("--no-early-stop", no_early_stop, "Run every trial to t_max");

  auto* se = app.add_subcommand("se", "State evolution against paired simulation");
  add_common(se, common);
  se->add_flag("--genie", genie, "Compare against the genie-beta run");
  se->add_option("--steps", se_steps, "State evolution steps")->check(CLI::NonNegativeNumber);

  auto* qq = app.add_subcommand("qq", "Effective-noise normality diagnostics");
  add_common(qq, common);
  qq->add_option("--at-iter", at_iter, "Iteration to capture")->check(CLI::Range(2, 100000));

  auto* selfcheck = app.add_subcommand("selfcheck", "Fast oracle checks");
  selfcheck->add_flag("--verbose", common.verbose, "Print tolerances and observed errors");
  selfcheck->add_flag("--fault-corrupt-denoiser", corrupt)->group("");

  auto* opcount = app.add_subcommand("opcount", "Complex multiply-accumulate counts");
  add_common(opcount, common);
  opcount->add_option("--iterations", op_iterations, "Iterations to count")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*ber) return cmd_ber(common);
    if (*converge) return cmd_converge(common, !no_early_stop);
    if (*se) {
      if (common.detectors.empty()) common.detectors = "ramp";
      return cmd_se(common, se_steps, genie);
    }
    if (*qq) {
      if (common.detectors.empty()) common.detectors = "ramp";
      return cmd_qq(common, at_iter);
    }
    if (*selfcheck) return cmd_selfcheck(common.verbose, corrupt);
    if (*opcount) return cmd_opcount(common, op_iterations);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "rampdet: config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rampdet: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitConfig;
}
