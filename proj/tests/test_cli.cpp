// Copyright 2026 The Basinsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "basinsep/cli.hpp"
#include "basinsep/csv.hpp"

using namespace basinsep;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

long count_lines(const std::string& text) {
  long n = 0;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

fs::path fresh_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "basinsep_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig small_separation(const fs::path& out) {
  RunConfig config = RunConfig::defaults(Command::separation);
  apply_override(config, "run.seeds=3");
  apply_override(config, "data.n_priv=64");
  apply_override(config, "run.n_mc=2000");
  config.out_dir = out.string();
  return config;
}

}  // namespace

TEST_CASE("format_double: shortest round-trip representation") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-4.5) == "-4.5");
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(std::stod(format_double(1e300)) == 1e300);
  CHECK_THROWS(format_double(std::nan("")));
}

TEST_CASE("config: unknown keys and wrong-command keys are errors") {
  RunConfig config = RunConfig::defaults(Command::separation);
  CHECK_THROWS_WITH_AS(apply_config_text(config, "spec.M_typo = 0.5\n", "test"),
                       doctest::Contains("unknown config key"),
                       std::invalid_argument);
  CHECK_THROWS(apply_config_text(config, "landscape.d1 = 0.5\n", "test"));
  CHECK_NOTHROW(apply_config_text(config, "# comment\n\nspec.M = 0.4\n", "test"));
  CHECK(config.sep.spec.M == 0.4);
  CHECK_THROWS(apply_override(config, "no_equals_sign"));
}

TEST_CASE("config: manifest round-trips losslessly") {
  RunConfig config = RunConfig::defaults(Command::separation);
  apply_override(config, "dp.epsilon=2.5");
  apply_override(config, "task.mode=ood");
  apply_override(config, "run.seeds=7");
  config.sep.resolve();
  config.sep.dp.sigma = config.sep.dp.resolved_sigma();
  const std::string manifest = manifest_text(config);

  RunConfig reparsed = RunConfig::defaults(Command::separation);
  apply_config_text(reparsed, manifest, "manifest");
  CHECK(manifest_text(reparsed) == manifest);
  CHECK(reparsed.sep.dp.epsilon == 2.5);
  CHECK(reparsed.sep.mode == TaskMode::ood);
  CHECK(reparsed.sep.seeds == 7);
}

TEST_CASE("cmd separation: outputs, shapes, reruns byte-identical") {
  const fs::path dir_a = fresh_dir("sep_a");
  const fs::path dir_b = fresh_dir("sep_b");
  std::ostringstream log;
  REQUIRE(run_command(small_separation(dir_a), log) == 0);
  REQUIRE(run_command(small_separation(dir_b), log) == 0);

  const std::string records = slurp(dir_a / "records.csv");
  CHECK(count_lines(records) == 1 + 3 * 3);  // header + seeds x arms
  CHECK(records.rfind("experiment,mode,seed,arm,excess_risk,evaluator,"
                      "basin_hit,block1_final_norm,block2_dist_to_mu2",
                      0) == 0);
  CHECK(records == slurp(dir_b / "records.csv"));
  CHECK(slurp(dir_a / "summary.csv") == slurp(dir_b / "summary.csv"));
  CHECK(slurp(dir_a / "manifest.txt") == slurp(dir_b / "manifest.txt"));
  CHECK(count_lines(slurp(dir_a / "summary.csv")) == 4);

  // re-running from the emitted manifest reproduces the outputs
  const fs::path dir_c = fresh_dir("sep_c");
  RunConfig from_manifest = RunConfig::defaults(Command::separation);
  apply_config_file(from_manifest, (dir_a / "manifest.txt").string());
  from_manifest.out_dir = dir_c.string();
  REQUIRE(run_command(from_manifest, log) == 0);
  CHECK(slurp(dir_c / "records.csv") == records);
}

TEST_CASE("cmd separation: OOD dataset dump has zero public d2") {
  const fs::path dir = fresh_dir("sep_dump");
  RunConfig config = small_separation(dir);
  apply_override(config, "task.mode=ood");
  apply_override(config, "run.dump_data=true");
  std::ostringstream log;
  REQUIRE(run_command(config, log) == 0);
  const std::string dump = slurp(dir / "datasets.csv");
  std::stringstream ss(dump);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "seed,origin,index,d1_norm,d2_norm");
  long public_rows = 0;
  while (std::getline(ss, line)) {
    if (line.find(",public,") == std::string::npos) continue;
    ++public_rows;
    CHECK(line.substr(line.rfind(',') + 1) == "0");
  }
  CHECK(public_rows == 3 * 32);
}

TEST_CASE("cmd quadratic: runs and reruns identically") {
  const fs::path dir_a = fresh_dir("quad_a");
  const fs::path dir_b = fresh_dir("quad_b");
  std::ostringstream log;
  RunConfig config = RunConfig::defaults(Command::quadratic);
  apply_override(config, "run.seeds=3");
  apply_override(config, "data.n_priv=64");
  config.out_dir = dir_a.string();
  REQUIRE(run_command(config, log) == 0);
  config.out_dir = dir_b.string();
  REQUIRE(run_command(config, log) == 0);
  CHECK(slurp(dir_a / "records.csv") == slurp(dir_b / "records.csv"));
  const std::string records = slurp(dir_a / "records.csv");
  CHECK(records.find("quadratic,id,0,public_only") != std::string::npos);
}

TEST_CASE("cmd schedule: three summary rows") {
  const fs::path dir = fresh_dir("sched");
  RunConfig config = RunConfig::defaults(Command::schedule);
  apply_override(config, "run.seeds=2");
  apply_override(config, "data.n_priv=32");
  apply_override(config, "run.n_mc=2000");
  config.out_dir = dir.string();
  std::ostringstream log;
  REQUIRE(run_command(config, log) == 0);
  const std::string summary = slurp(dir / "summary.csv");
  CHECK(count_lines(summary) == 4);
  CHECK(summary.find("front_loaded") != std::string::npos);
  CHECK(summary.find("back_loaded") != std::string::npos);
  CHECK(summary.find("uniform") != std::string::npos);
}

TEST_CASE("cmd landscape: toy slice reproduces the two-well structure") {
  const fs::path dir = fresh_dir("land");
  RunConfig config = RunConfig::defaults(Command::landscape);
  config.out_dir = dir.string();
  std::ostringstream log;
  REQUIRE(run_command(config, log) == 0);
  CHECK(log.str().find("2 local minima") != std::string::npos);
  const std::string slice = slurp(dir / "slice.csv");
  CHECK(slice.rfind("theta1,theta2,value", 0) == 0);
  CHECK(count_lines(slice) == 1 + 2 * 401);
  CHECK(fs::exists(dir / "heatmap.csv"));

  // plane mode writes plane.csv
  const fs::path dir_p = fresh_dir("land_plane");
  RunConfig plane_config = RunConfig::defaults(Command::landscape);
  apply_override(plane_config, "landscape.kind=plane");
  apply_override(plane_config, "landscape.plane_res=21");
  plane_config.out_dir = dir_p.string();
  REQUIRE(run_command(plane_config, log) == 0);
  const std::string plane = slurp(dir_p / "plane.csv");
  CHECK(plane.rfind("u,v,value", 0) == 0);
  CHECK(count_lines(plane) == 1 + 21 * 21);
}

TEST_CASE("cmd calibrate: csv shape and determinism") {
  const fs::path dir_a = fresh_dir("cal_a");
  const fs::path dir_b = fresh_dir("cal_b");
  RunConfig config = RunConfig::defaults(Command::calibrate);
  apply_override(config, "calibrate.trials=50");
  apply_override(config, "calibrate.n_pub_grid=4,16,32");
  std::ostringstream log;
  config.out_dir = dir_a.string();
  REQUIRE(run_command(config, log) == 0);
  config.out_dir = dir_b.string();
  REQUIRE(run_command(config, log) == 0);
  const std::string cal = slurp(dir_a / "calibration.csv");
  CHECK(cal.rfind("n_pub,trials,landing_rate,margin_rate", 0) == 0);
  CHECK(count_lines(cal) == 4);
  CHECK(cal == slurp(dir_b / "calibration.csv"));
}

TEST_CASE("invalid spec rejected with the violated invariant named") {
  RunConfig config = RunConfig::defaults(Command::separation);
  apply_override(config, "spec.R1=0.6");  // violates R1 < M
  std::ostringstream log;
  CHECK(run_command(config, log) != 0);
  CHECK(log.str().find("R1 < M") != std::string::npos);
}
