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

#include "rampdet/io.hpp"

#include <fstream>

#include <fmt/format.h>

#include "rampdet/config.hpp"

namespace rampdet {

namespace {

std::string preamble(const SimConfig& cfg) {
  return fmt::format("# config_digest={} seed={}\n", digest_hex(config_digest(cfg)), cfg.seed);
}

nlohmann::json qq_json(const QqDiagnostic& d) {
  return {{"ks_stat", d.ks_stat},
          {"samples", d.sorted_samples.size()},
          {"sorted_samples", d.sorted_samples},
          {"theoretical_quantiles", d.theoretical_quantiles}};
}

void append_series(std::string& out, std::string_view name, const QqDiagnostic& d) {
  for (std::size_t k = 0; k < d.sorted_samples.size(); ++k) {
    out += fmt::format("{},{},{},{}\n", name, k + 1, d.theoretical_quantiles[k],
                       d.sorted_samples[k]);
  }
}

}  // namespace

std::string results_csv(const SimConfig& cfg, std::span<const RunResult> results,
                        bool include_timing) {
  std::string out = preamble(cfg);
  out += kCsvHeader;
  out += '\n';
  for (const RunResult& r : results) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},", to_string(r.detector), r.m, r.n,
                       to_string(r.modulation), r.ebn0_db, r.trials, r.bit_errors, r.total_bits,
                       r.ber, r.avg_iterations, r.divergence_failures);
    if (include_timing) out += fmt::format("{}", r.wall_time_s);
    out += fmt::format(",{}\n", r.op_count);
  }
  return out;
}

nlohmann::json to_json(const SimConfig& cfg) {
  std::vector<std::string> detectors;
  for (DetectorId d : cfg.detectors) detectors.emplace_back(to_string(d));
  return {{"m", cfg.m},
          {"n", cfg.n},
          {"modulation", std::string(to_string(cfg.modulation))},
          {"ebn0_db_grid", cfg.ebn0_db_grid},
          {"trials", cfg.trials},
          {"alpha", cfg.alpha},
          {"lambda_eff", cfg.lambda_eff},
          {"t_max", cfg.t_max},
          {"epsilon", cfg.epsilon},
          {"seed", cfg.seed},
          {"detectors", detectors}};
}

nlohmann::json to_json(const RunResult& r) {
  return {{"config_digest", digest_hex(r.config_digest)},
          {"detector", std::string(to_string(r.detector))},
          {"m", r.m},
          {"n", r.n},
          {"modulation", std::string(to_string(r.modulation))},
          {"ebn0_db", r.ebn0_db},
          {"trials", r.trials},
          {"bit_errors", r.bit_errors},
          {"total_bits", r.total_bits},
          {"ber", r.ber},
          {"avg_iterations", r.avg_iterations},
          {"divergence_failures", r.divergence_failures},
          {"wall_time_s", r.wall_time_s},
          {"op_count", r.op_count}};
}

nlohmann::json to_json(const ConvergenceTrace& t) {
  nlohmann::json points = nlohmann::json::array();
  for (const ConvergencePoint& p : t.points) {
    points.push_back({{"t", p.t},
                      {"ber", p.ber},
                      {"mean_eps", p.mean_eps},
                      {"converged_fraction", p.converged_fraction}});
  }
  return {{"kind", "convergence"},
          {"detector", std::string(to_string(t.detector))},
          {"ebn0_db", t.ebn0_db},
          {"trials", t.trials},
          {"early_stop", t.early_stop},
          {"trace", points},
          {"first_converged", t.first_converged},
          {"final", to_json(t.final)}};
}

nlohmann::json to_json(const SeComparison& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SeRow& r : s.rows) {
    rows.push_back({{"step", r.step},
                    {"predicted", r.predicted},
                    {"genie_empirical", r.genie_empirical},
                    {"genie_v", r.genie_v},
                    {"genie_mse", r.genie_mse},
                    {"state_empirical", r.state_empirical},
                    {"state_v", r.state_v},
                    {"state_mse", r.state_mse},
                    {"deviation", r.deviation}});
  }
  return {{"kind", "state_evolution"},
          {"ebn0_db", s.ebn0_db},
          {"sigma_n2", s.sigma_n2},
          {"sigma2_seq", s.prediction.sigma2_seq},
          {"mse_seq", s.prediction.mse_seq},
          {"empirical_mse_seq", s.prediction.empirical_mse_seq},
          {"rows", rows},
          {"genie", to_json(s.genie_result)},
          {"state_dependent", to_json(s.state_result)}};
}

nlohmann::json to_json(const QqExperiment& q) {
  return {{"kind", "qq"},
          {"ebn0_db", q.ebn0_db},
          {"at_iter", q.at_iter},
          {"state_dependent", qq_json(q.state_dependent)},
          {"genie", qq_json(q.genie)},
          {"state_result", to_json(q.state_result)},
          {"genie_result", to_json(q.genie_result)}};
}

nlohmann::json sidecar(const SimConfig& cfg, nlohmann::json records) {
  return {{"config", to_json(cfg)},
          {"config_digest", digest_hex(config_digest(cfg))},
          {"seed", cfg.seed},
          {"records", std::move(records)}};
}

std::string qq_csv(const SimConfig& cfg, const QqExperiment& q) {
  std::string out = preamble(cfg);
  out += fmt::format("# ebn0_db={} at_iter={} ks_state_dependent={} ks_genie={}\n", q.ebn0_db,
                     q.at_iter, q.state_dependent.ks_stat, q.genie.ks_stat);
  out += "series,k,theoretical_quantile,empirical_quantile\n";
  append_series(out, "state_dependent", q.state_dependent);
  append_series(out, "genie", q.genie);
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

}  // namespace rampdet
