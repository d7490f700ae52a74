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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = RAMPDET_CLI_PATH;
const std::string kConfigs = RAMPDET_CONFIG_DIR;

struct Run {
  int code;
  std::string output;
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rampdet_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Run run(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "log.txt";
  const std::string cmd = kCli + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(log)};
}

const std::string kSmall = "--config " + kConfigs + "/desk.cfg --set trials=3 --set t_max=20 ";

}  // namespace

TEST_CASE("missing config exits with a config error naming the path") {
  const fs::path dir = scratch("missing");
  const Run r = run("ber --config /no/such/file.cfg --out " + dir.string(), dir);
  CHECK(r.code == 1);
  CHECK(r.output.find("/no/such/file.cfg") != std::string::npos);
}

TEST_CASE("usage errors exit with status 1") {
  const fs::path dir = scratch("usage");
  CHECK(run("ber --no-such-flag", dir).code == 1);
  CHECK(run("", dir).code == 1);
  CHECK(run(kSmall + "--set bogus=1 --out " + dir.string(), dir).code == 1);
}

TEST_CASE("ber writes csv and sidecar and reproduces its bytes") {
  const fs::path a = scratch("ber_a");
  const fs::path b = scratch("ber_b");
  REQUIRE(run("ber " + kSmall + "--out " + a.string(), a).code == 0);
  REQUIRE(run("ber " + kSmall + "--out " + b.string(), b).code == 0);
  const std::string csv = slurp(a / "ber.csv");
  CHECK(csv == slurp(b / "ber.csv"));
  CHECK(csv.rfind("# config_digest=", 0) == 0);
  const auto j = nlohmann::json::parse(slurp(a / "ber.json"));
  CHECK(j.at("config").at("trials").get<int>() == 3);
  CHECK(j.at("records").size() == 7 * 3);
}

TEST_CASE("command-line flags take precedence over the file") {
  const fs::path dir = scratch("precedence");
  REQUIRE(run("ber " + kSmall + "--seed 5 --trials 2 --detectors lmmse --ebn0 9 --out " + dir.string(), dir)
              .code == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "ber.json"));
  CHECK(j.at("seed").get<std::uint64_t>() == 5);
  CHECK(j.at("config").at("trials").get<int>() == 2);
  CHECK(j.at("config").at("ebn0_db_grid") == nlohmann::json::array({9.0}));
  CHECK(j.at("records").size() == 1);
}

TEST_CASE("qq writes paired quantile tables") {
  const fs::path dir = scratch("qq");
  const Run r = run("qq " + kSmall + "--set trials=20 --ebn0 10 --at-iter 15 --out " + dir.string(), dir);
  REQUIRE(r.code == 0);
  const std::string table = slurp(dir / "qq_quantiles_10dB.csv");
  CHECK(table.find("state_dependent,1,") != std::string::npos);
  CHECK(table.find("genie,1,") != std::string::npos);
  CHECK(fs::exists(dir / "qq.json"));
}

TEST_CASE("se --genie selects the genie run") {
  const fs::path dir = scratch("se");
  REQUIRE(run("se " + kSmall + "--ebn0 10 --genie --out " + dir.string(), dir).code == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "se.json"));
  CHECK(j.at("records").at(0).at("compared_run") == "genie");
}

TEST_CASE("converge --no-early-stop runs to t_max") {
  const fs::path dir = scratch("converge");
  REQUIRE(run("converge " + kSmall + "--detectors robust-ramp --ebn0 10 --no-early-stop --out " + dir.string(),
              dir)
              .code == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "converge.json"));
  const auto& rec = j.at("records").at(0);
  CHECK(rec.at("early_stop") == false);
  CHECK(rec.at("final").at("avg_iterations").get<double>() == 20.0);
}

TEST_CASE("selfcheck passes and fails on a corrupted denoiser") {
  const fs::path dir = scratch("selfcheck");
  const Run ok = run("selfcheck --verbose", dir);
  CHECK(ok.code == 0);
  CHECK(ok.output.find("tolerance") != std::string::npos);
  const Run bad = run("selfcheck --fault-corrupt-denoiser", dir);
  CHECK(bad.code == 3);
  CHECK(bad.output.find("FAIL denoiser_grid_search") != std::string::npos);
}

TEST_CASE("opcount writes per-detector counts") {
  const fs::path dir = scratch("opcount");
  REQUIRE(run("opcount --detectors ramp,idls-base --iterations 3 --out " + dir.string(), dir).code == 0);
  const std::string csv = slurp(dir / "opcount.csv");
  CHECK(csv.find("ramp,32,26,3,") != std::string::npos);
  CHECK(csv.find("idls-base,32,26,3,") != std::string::npos);
}

TEST_CASE("timing flag fills the wall time column") {
  const fs::path dir = scratch("timing");
  REQUIRE(run("ber " + kSmall + "--detectors zf --ebn0 10 --timing --out " + dir.string(), dir).code == 0);
  std::istringstream csv(slurp(dir / "ber.csv"));
  std::string line;
  std::getline(csv, line);  // digest comment
  std::getline(csv, line);  // header
  std::getline(csv, line);
  // wall_time_s is the twelfth column.
  std::istringstream row(line);
  std::string field;
  for (int i = 0; i < 12; ++i) std::getline(row, field, ',');
  CHECK_FALSE(field.empty());
  CHECK(std::stod(field) >= 0.0);
}
