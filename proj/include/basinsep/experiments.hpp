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

#ifndef BASINSEP_EXPERIMENTS_HPP_
#define BASINSEP_EXPERIMENTS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "basinsep/distributions.hpp"
#include "basinsep/loss.hpp"
#include "basinsep/optim.hpp"

namespace basinsep {

enum class ScalingMode { desk, theorem };

struct SeparationConfig {
  BasinLossSpec spec;
  TaskMode mode = TaskMode::id;
  ScalingMode scaling = ScalingMode::desk;
  long n_pub = 32;
  long n_priv = 512;
  DpSgdConfig dp;
  int seeds = 20;
  long n_mc = 100000;
  double rho = 0.5;
  EvaluatorPreference evaluator = EvaluatorPreference::closed_form_when_valid;

  // Desk defaults: p = 4, dim1 = 256, dim2 = 4, n_pub = 32, n_priv = 512,
  // eps = 1, delta = 1e-4, M = 0.5, R1 = 0.25, R2 = 0.2, r = 1e-3,
  // 20 seeds. `desk_scaled(p)` keeps the constants and scales the sizes
  // (dim1 = p^4, dim2 = p, n_pub = 2p^2, n_priv = 32p^2) for trend sweeps.
  static SeparationConfig desk_default();
  static SeparationConfig desk_scaled(int p);
  static SeparationConfig theorem_scaled(int p, double epsilon, double delta);

  // Fills dp fields that are left at their auto markers: L = 3p/r + 3,
  // m = p/r^2, T = n_priv^2, sigma calibrated.
  void resolve();
  void validate() const;
};

struct ArmRecord {
  int seed = 0;
  std::string arm;
  double excess_risk = 0.0;
  EvaluatorKind evaluator = EvaluatorKind::closed_form;
  bool basin_hit = false;
  double block1_final_norm = 0.0;
  double block2_dist_to_mu2 = 0.0;
  // Extra diagnostics, not part of the CSV schema.
  double max_block1_displacement = 0.0;
  long projection_violations = 0;
};

struct ArmSummary {
  std::string arm;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  int n = 0;
};

struct ExperimentReport {
  std::string experiment;
  TaskMode mode = TaskMode::id;
  std::vector<ArmRecord> records;  // ordered by (seed, arm)
  std::vector<ArmSummary> summary;
  std::uint64_t root_seed = 0;

  const ArmSummary& summary_for(const std::string& arm) const;
  std::vector<double> excess_for(const std::string& arm) const;
};

// One full-batch GD step (step size 1) from the origin on the public data,
// then block two clipped to the ball of radius r. Because the gate vanishes
// in a neighborhood of the origin, the step lands block one exactly on the
// public empirical mean of d1 and leaves block two at zero.
ParamPoint algo_public_only(const TaskInstance& task, const Dataset& pub);

// DP-SGD from the origin on the private data, composite loss.
ParamPoint algo_private_only(const TaskInstance& task, const Dataset& priv,
                             const DpSgdConfig& dp, RngStream stream);

// The public GD step (without the final clip) followed by DP-SGD on the
// private data from that point. Returns the final point and the DP-SGD
// trajectory diagnostics.
struct MixedResult {
  ParamPoint point;
  Trajectory dpsgd_trajectory;
};
MixedResult algo_mixed(const TaskInstance& task, const Dataset& pub,
                       const Dataset& priv, const DpSgdConfig& dp,
                       RngStream stream);

// Runs the three arms of the separation experiment over `seeds` independent
// tasks; seeds run in parallel, records assemble in seed order.
ExperimentReport run_separation(const SeparationConfig& config,
                                std::uint64_t root_seed);

// The same three-arm structure on the constrained quadratic loss, per-block
// ball projections enabled in every arm.
ExperimentReport run_quadratic_separation(const SeparationConfig& config,
                                          std::uint64_t root_seed);

struct ScheduleConfig {
  BasinLossSpec spec;
  long n_priv = 256;
  DpSgdConfig dp;
  int seeds = 20;
  long n_mc = 100000;
  double rho = 0.5;
  double low_mult = 0.25;
  double high_mult = 1.75;
  double split = 0.5;  // fraction of steps in the first phase
  EvaluatorPreference evaluator = EvaluatorPreference::closed_form_when_valid;

  // Defaults tuned so basin selection is noise-critical: r = 0.1, m = 1
  // (step size 1/t), clip L = 3, eps = 0.2, block two projected to
  // B(0, r). Under these the first phase decides whether the iterate finds
  // the annulus or is thrown into the flat clamp region and freezes there.
  static ScheduleConfig default_config();
  void resolve();

  NoiseSchedule front_loaded() const;
  NoiseSchedule back_loaded() const;
  NoiseSchedule uniform() const;  // low/high interleaved per step
};

// Private-only DP-SGD under the three equal-budget schedules. Noise and
// sampling streams are shared across schedules within a seed, so the
// comparison is paired.
ExperimentReport run_schedule_comparison(const ScheduleConfig& config,
                                         std::uint64_t root_seed);

struct CalibrationRow {
  long n_pub = 0;
  long trials = 0;
  double landing_rate = 0.0;  // block one inside S after the public step
  double margin_rate = 0.0;   // inside S with margin >= margin_frac * R1
};

struct CalibrationReport {
  std::vector<CalibrationRow> rows;
  double margin_frac = 0.2;
  std::uint64_t root_seed = 0;
};

// Empirical probability that the public GD step lands block one inside S
// (and with a safety margin), per n_pub in the grid.
CalibrationReport calibrate_basin_landing(const BasinLossSpec& spec,
                                          const std::vector<long>& n_pub_grid,
                                          long trials, double margin_frac,
                                          double rho, std::uint64_t root_seed);

const char* task_mode_name(TaskMode mode);
const char* evaluator_name(EvaluatorKind kind);

// Per-seed derivation roots, shared by the experiment drivers and the
// dataset dump so both see identical data.
RngStream separation_base_stream(std::uint64_t root_seed, TaskMode mode,
                                 int seed);
RngStream quadratic_base_stream(std::uint64_t root_seed, int seed);

}  // namespace basinsep

#endif  // BASINSEP_EXPERIMENTS_HPP_
