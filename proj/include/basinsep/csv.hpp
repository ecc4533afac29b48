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

#ifndef BASINSEP_CSV_HPP_
#define BASINSEP_CSV_HPP_

#include <string>

#include "basinsep/experiments.hpp"
#include "basinsep/landscape.hpp"

namespace basinsep {

// Shortest round-trip decimal representation (at most 17 significant
// digits), locale-independent.
std::string format_double(double x);

// records.csv: experiment,mode,seed,arm,excess_risk,evaluator,basin_hit,
// block1_final_norm,block2_dist_to_mu2
std::string records_csv(const ExperimentReport& report);

// summary.csv: arm,median,q25,q75,n
std::string summary_csv(const ExperimentReport& report);

// calibration.csv: n_pub,trials,landing_rate,margin_rate
std::string calibration_csv(const CalibrationReport& report);

// Grid CSV: <label1>,<label2>,value, rows in row-major axis order.
std::string grid_csv(const GridResult& grid);

// Throws std::runtime_error on I/O failure.
void write_file(const std::string& path, const std::string& contents);

}  // namespace basinsep

#endif  // BASINSEP_CSV_HPP_
