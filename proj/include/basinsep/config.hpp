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

#ifndef BASINSEP_CONFIG_HPP_
#define BASINSEP_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "basinsep/experiments.hpp"
#include "basinsep/landscape.hpp"

namespace basinsep {

enum class Command {
  separation,
  quadratic,
  schedule,
  landscape,
  calibrate,
  selftest,
};

const char* command_name(Command command);
Command parse_command(const std::string& name);

struct LandscapeConfig {
  BasinLossSpec spec;
  std::string kinds = "slice,heatmap";  // subset of slice,heatmap,plane
  double d1 = 0.5;
  double d2 = 0.005;
  AxisSpec range1{-1.0, 1.0, 401};
  AxisSpec range2{-0.02, 0.03, 201};
  std::vector<double> theta2_slices = {0.005, -0.005};
  double plane_margin = 0.25;
  long plane_res = 61;
};

struct CalibrateConfig {
  BasinLossSpec spec;
  std::vector<long> n_pub_grid = {1, 2, 4, 8, 16, 32};
  long trials = 200;
  double margin_frac = 0.2;
  double rho = 0.5;
};

// Fully resolved run description: one command plus every knob it reads.
// Round-trips losslessly through the flat `key = value` config format; the
// run manifest is itself a valid config file.
struct RunConfig {
  Command command = Command::selftest;
  std::uint64_t root_seed = 42;
  std::string out_dir = "out";
  bool dump_data = false;

  SeparationConfig sep;  // separation and quadratic
  ScheduleConfig sched;
  LandscapeConfig land;
  CalibrateConfig cal;

  static RunConfig defaults(Command command);
};

// Applies `key = value` lines from a config file. Unknown keys and keys that
// do not apply to the config's command are errors.
void apply_config_text(RunConfig& config, const std::string& text,
                       const std::string& source_name);
void apply_config_file(RunConfig& config, const std::string& path);

// Applies one dotted override, e.g. "dp.epsilon=2".
void apply_override(RunConfig& config, const std::string& key_equals_value);

// The resolved config as config-format text (excludes the output directory).
std::string manifest_text(const RunConfig& config);

}  // namespace basinsep

#endif  // BASINSEP_CONFIG_HPP_
