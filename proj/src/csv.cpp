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

#include "basinsep/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace basinsep {

std::string format_double(double x) {
  if (!std::isfinite(x)) {
    throw std::runtime_error("format_double: non-finite value in output");
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string records_csv(const ExperimentReport& report) {
  std::string out =
      "experiment,mode,seed,arm,excess_risk,evaluator,basin_hit,"
      "block1_final_norm,block2_dist_to_mu2\n";
  for (const ArmRecord& rec : report.records) {
    out += report.experiment;
    out += ',';
    out += task_mode_name(report.mode);
    out += ',';
    out += std::to_string(rec.seed);
    out += ',';
    out += rec.arm;
    out += ',';
    out += format_double(rec.excess_risk);
    out += ',';
    out += evaluator_name(rec.evaluator);
    out += ',';
    out += rec.basin_hit ? '1' : '0';
    out += ',';
    out += format_double(rec.block1_final_norm);
    out += ',';
    out += format_double(rec.block2_dist_to_mu2);
    out += '\n';
  }
  return out;
}

std::string summary_csv(const ExperimentReport& report) {
  std::string out = "arm,median,q25,q75,n\n";
  for (const ArmSummary& s : report.summary) {
    out += s.arm;
    out += ',';
    out += format_double(s.median);
    out += ',';
    out += format_double(s.q25);
    out += ',';
    out += format_double(s.q75);
    out += ',';
    out += std::to_string(s.n);
    out += '\n';
  }
  return out;
}

std::string calibration_csv(const CalibrationReport& report) {
  std::string out = "n_pub,trials,landing_rate,margin_rate\n";
  for (const CalibrationRow& row : report.rows) {
    out += std::to_string(row.n_pub);
    out += ',';
    out += std::to_string(row.trials);
    out += ',';
    out += format_double(row.landing_rate);
    out += ',';
    out += format_double(row.margin_rate);
    out += '\n';
  }
  return out;
}

std::string grid_csv(const GridResult& grid) {
  std::string out = grid.label1 + "," + grid.label2 + ",value\n";
  for (long i = 0; i < grid.axis1.n; ++i) {
    for (long j = 0; j < grid.axis2.n; ++j) {
      out += format_double(grid.axis1.at(i));
      out += ',';
      out += format_double(grid.axis2.at(j));
      out += ',';
      out += format_double(grid.at(i, j));
      out += '\n';
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace basinsep
