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

#include "basinsep/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "basinsep/stats.hpp"

namespace basinsep {
namespace {

constexpr const char* kArms[] = {"public_only", "private_only", "mixed"};

void require_origin(const Dataset& data, DataOrigin origin, const char* who) {
  if (data.origin != origin) {
    throw std::logic_error(std::string(who) +
                           ": dataset has the wrong provenance tag");
  }
}

void require_public_d2_zero(const Dataset& pub) {
  for (const DataPoint& d : pub.points) {
    for (std::size_t i = 0; i < d.d2.dim(); ++i) {
      if (d.d2[i] != 0.0) {
        throw std::logic_error(
            "run_separation: OOD public data must have d2 identically zero");
      }
    }
  }
}

bool in_basin(const BasinLossSpec& spec, const RealVector& theta1) {
  return annulus_distance(norm(theta1), spec.M, spec.R1) == 0.0;
}

std::vector<ArmSummary> summarize(const std::vector<ArmRecord>& records,
                                  const std::vector<std::string>& arms) {
  std::vector<ArmSummary> out;
  for (const std::string& arm : arms) {
    std::vector<double> xs;
    for (const ArmRecord& rec : records) {
      if (rec.arm == arm) xs.push_back(rec.excess_risk);
    }
    ArmSummary s;
    s.arm = arm;
    s.n = static_cast<int>(xs.size());
    s.median = median(xs);
    s.q25 = quantile(xs, 0.25);
    s.q75 = quantile(xs, 0.75);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

const char* task_mode_name(TaskMode mode) {
  return mode == TaskMode::id ? "id" : "ood";
}

const char* evaluator_name(EvaluatorKind kind) {
  return kind == EvaluatorKind::closed_form ? "closed_form" : "monte_carlo";
}

RngStream separation_base_stream(std::uint64_t root_seed, TaskMode mode,
                                 int seed) {
  return derive_stream(root_seed, {"sep", task_mode_name(mode), seed});
}

RngStream quadratic_base_stream(std::uint64_t root_seed, int seed) {
  return derive_stream(root_seed, {"quad", seed});
}

const ArmSummary& ExperimentReport::summary_for(const std::string& arm) const {
  for (const ArmSummary& s : summary) {
    if (s.arm == arm) return s;
  }
  throw std::out_of_range("no summary for arm " + arm);
}

std::vector<double> ExperimentReport::excess_for(const std::string& arm) const {
  std::vector<double> xs;
  for (const ArmRecord& rec : records) {
    if (rec.arm == arm) xs.push_back(rec.excess_risk);
  }
  return xs;
}

SeparationConfig SeparationConfig::desk_default() { return desk_scaled(4); }

SeparationConfig SeparationConfig::desk_scaled(int p) {
  SeparationConfig config;
  config.spec = BasinLossSpec::desk_scaled(p);
  config.n_pub = 2L * p * p;
  config.n_priv = 32L * p * p;
  config.dp.epsilon = 1.0;
  config.dp.delta = 1e-4;
  config.dp.m = -1.0;
  config.dp.L = -1.0;
  config.dp.T = 0;
  config.dp.sigma = -1.0;
  config.seeds = 20;
  config.n_mc = 100000;
  config.rho = 0.5;
  return config;
}

SeparationConfig SeparationConfig::theorem_scaled(int p, double epsilon,
                                                  double delta) {
  SeparationConfig config;
  config.spec = BasinLossSpec::theorem_scaled(p, epsilon, delta);
  config.scaling = ScalingMode::theorem;
  config.n_pub = p;
  config.n_priv = static_cast<long>(p) * p;
  config.dp.epsilon = epsilon;
  config.dp.delta = delta;
  config.dp.m = -1.0;
  config.dp.L = -1.0;
  config.dp.T = 0;
  config.dp.sigma = -1.0;
  return config;
}

void SeparationConfig::resolve() {
  spec.validate();
  dp.n = n_priv;
  const double p = static_cast<double>(spec.p);
  if (dp.L <= 0.0) dp.L = 3.0 * p / spec.r + 3.0;
  if (dp.m <= 0.0) dp.m = p / (spec.r * spec.r);
  if (dp.T == 0) dp.T = n_priv * n_priv;
}

void SeparationConfig::validate() const {
  spec.validate();
  if (n_pub < 1 || n_priv < 1) {
    throw std::invalid_argument("SeparationConfig: sample sizes must be >= 1");
  }
  if (seeds < 1) {
    throw std::invalid_argument("SeparationConfig: seeds must be >= 1");
  }
  if (n_mc < 2) {
    throw std::invalid_argument("SeparationConfig: n_mc must be >= 2");
  }
  if (rho <= 0.0 || rho >= 1.0) {
    throw std::invalid_argument("SeparationConfig: rho must be in (0, 1)");
  }
  dp.validate();
  if (scaling == ScalingMode::theorem) {
    const long p = spec.p;
    if (n_pub != p || n_priv != p * p ||
        spec.dim1 != static_cast<std::size_t>(p) * p * p * p ||
        spec.dim2 != static_cast<std::size_t>(p)) {
      throw std::invalid_argument(
          "SeparationConfig: theorem scaling requires n_pub = p, "
          "n_priv = p^2, dim1 = p^4, dim2 = p");
    }
  }
}

ParamPoint algo_public_only(const TaskInstance& task, const Dataset& pub) {
  require_origin(pub, DataOrigin::public_data, "algo_public_only");
  const BasinLoss loss(task.spec);
  GdConfig gd;
  gd.steps = 1;
  gd.step_size = 1.0;
  ParamPoint theta0 = ParamPoint::zeros(task.spec.dim1, task.spec.dim2);
  ParamPoint out = run_gd(loss, pub, gd, theta0).final_point;
  out.theta2 = project_ball(out.theta2, task.spec.r);
  return out;
}

ParamPoint algo_private_only(const TaskInstance& task, const Dataset& priv,
                             const DpSgdConfig& dp, RngStream stream) {
  require_origin(priv, DataOrigin::private_data, "algo_private_only");
  const BasinLoss loss(task.spec);
  ParamPoint theta0 = ParamPoint::zeros(task.spec.dim1, task.spec.dim2);
  return run_dpsgd(loss, priv, dp, theta0, std::move(stream)).final_point;
}

MixedResult algo_mixed(const TaskInstance& task, const Dataset& pub,
                       const Dataset& priv, const DpSgdConfig& dp,
                       RngStream stream) {
  require_origin(pub, DataOrigin::public_data, "algo_mixed");
  require_origin(priv, DataOrigin::private_data, "algo_mixed");
  const BasinLoss loss(task.spec);
  GdConfig gd;
  gd.steps = 1;
  gd.step_size = 1.0;
  ParamPoint theta0 = ParamPoint::zeros(task.spec.dim1, task.spec.dim2);
  ParamPoint pretrained = run_gd(loss, pub, gd, theta0).final_point;
  MixedResult result;
  result.dpsgd_trajectory =
      run_dpsgd(loss, priv, dp, pretrained, std::move(stream));
  result.point = result.dpsgd_trajectory.final_point;
  return result;
}

namespace {

struct SeedOutputs {
  ParamPoint points[3];
  double max_disp[3] = {0.0, 0.0, 0.0};
  long proj_violations[3] = {0, 0, 0};
};

ExperimentReport assemble_report(
    const char* experiment, const SeparationConfig& config,
    std::uint64_t root_seed,
    const std::vector<SeedOutputs>& outputs,
    const std::vector<TaskInstance>& tasks,
    const std::vector<RngStream>& mc_streams,
    bool quadratic) {
  ExperimentReport report;
  report.experiment = experiment;
  report.mode = config.mode;
  report.root_seed = root_seed;
  const QuadraticLossSpec qspec = QuadraticLossSpec::from_basin(config.spec);
  report.records.reserve(static_cast<std::size_t>(config.seeds) * 3);
  for (int seed = 0; seed < config.seeds; ++seed) {
    const TaskInstance& task = tasks[static_cast<std::size_t>(seed)];
    for (int a = 0; a < 3; ++a) {
      const SeedOutputs& out = outputs[static_cast<std::size_t>(seed)];
      const ParamPoint& theta = out.points[a];
      ArmRecord rec;
      rec.seed = seed;
      rec.arm = kArms[a];
      if (quadratic) {
        rec.excess_risk = quadratic_excess_risk(qspec, task, theta);
        rec.evaluator = EvaluatorKind::closed_form;
      } else {
        const RiskResult risk = excess_risk(
            config.spec, task, theta, config.evaluator, config.n_mc,
            mc_streams[static_cast<std::size_t>(seed)].child(kArms[a]));
        rec.excess_risk = risk.excess;
        rec.evaluator = risk.evaluator;
      }
      rec.basin_hit = in_basin(config.spec, theta.theta1);
      rec.block1_final_norm = norm(theta.theta1);
      rec.block2_dist_to_mu2 = distance(theta.theta2, task.mu2);
      rec.max_block1_displacement = out.max_disp[a];
      rec.projection_violations = out.proj_violations[a];
      report.records.push_back(std::move(rec));
    }
  }
  report.summary = summarize(
      report.records, {kArms[0], kArms[1], kArms[2]});
  return report;
}

}  // namespace

ExperimentReport run_separation(const SeparationConfig& base_config,
                                std::uint64_t root_seed) {
  SeparationConfig config = base_config;
  config.resolve();
  config.validate();

  const int seeds = config.seeds;
  std::vector<SeedOutputs> outputs(static_cast<std::size_t>(seeds));
  std::vector<TaskInstance> tasks(static_cast<std::size_t>(seeds));
  std::vector<RngStream> mc_streams;
  mc_streams.reserve(static_cast<std::size_t>(seeds));
  for (int seed = 0; seed < seeds; ++seed) {
    mc_streams.push_back(derive_stream(
        root_seed, {"sep", task_mode_name(config.mode), seed, "mc"}));
  }

#pragma omp parallel for schedule(dynamic)
  for (int seed = 0; seed < seeds; ++seed) {
    RngStream base = separation_base_stream(root_seed, config.mode, seed);
    TaskInstance task =
        make_task(config.spec, config.mode, config.rho, base.child("task"));
    RngStream pub_stream = base.child("pub");
    Dataset pub =
        sample_dataset(task.pub_dist, pub_stream,
                       static_cast<std::size_t>(config.n_pub),
                       DataOrigin::public_data);
    RngStream priv_stream = base.child("priv");
    Dataset priv =
        sample_dataset(task.priv_dist, priv_stream,
                       static_cast<std::size_t>(config.n_priv),
                       DataOrigin::private_data);
    if (config.mode == TaskMode::ood) require_public_d2_zero(pub);

    SeedOutputs& out = outputs[static_cast<std::size_t>(seed)];
    out.points[0] = algo_public_only(task, pub);
    out.points[1] =
        algo_private_only(task, priv, config.dp, base.child("arm_private"));
    MixedResult mixed =
        algo_mixed(task, pub, priv, config.dp, base.child("arm_mixed"));
    out.points[2] = mixed.point;
    out.max_disp[2] = mixed.dpsgd_trajectory.max_block1_displacement;
    tasks[static_cast<std::size_t>(seed)] = std::move(task);
  }

  return assemble_report("separation", config, root_seed, outputs, tasks,
                         mc_streams, /*quadratic=*/false);
}

ExperimentReport run_quadratic_separation(const SeparationConfig& base_config,
                                          std::uint64_t root_seed) {
  SeparationConfig config = base_config;
  config.resolve();
  config.validate();
  const QuadraticLossSpec qspec = QuadraticLossSpec::from_basin(config.spec);
  const ProjectionPair projection{
      BlockProjection::ball(qspec.radius1),
      BlockProjection::ball(qspec.radius2)};
  DpSgdConfig dp = config.dp;
  dp.projection = projection;

  const int seeds = config.seeds;
  std::vector<SeedOutputs> outputs(static_cast<std::size_t>(seeds));
  std::vector<TaskInstance> tasks(static_cast<std::size_t>(seeds));
  std::vector<RngStream> mc_streams;  // unused (closed form) but keeps shape
  mc_streams.reserve(static_cast<std::size_t>(seeds));
  for (int seed = 0; seed < seeds; ++seed) {
    mc_streams.push_back(derive_stream(root_seed, {"quad", seed, "mc"}));
  }

#pragma omp parallel for schedule(dynamic)
  for (int seed = 0; seed < seeds; ++seed) {
    RngStream base = quadratic_base_stream(root_seed, seed);
    TaskInstance task =
        make_task(config.spec, config.mode, config.rho, base.child("task"));
    RngStream pub_stream = base.child("pub");
    Dataset pub =
        sample_dataset(task.pub_dist, pub_stream,
                       static_cast<std::size_t>(config.n_pub),
                       DataOrigin::public_data);
    RngStream priv_stream = base.child("priv");
    Dataset priv =
        sample_dataset(task.priv_dist, priv_stream,
                       static_cast<std::size_t>(config.n_priv),
                       DataOrigin::private_data);

    const QuadraticLoss loss(qspec);
    GdConfig gd;
    gd.steps = 1;
    gd.step_size = 1.0;
    gd.projection = projection;
    const ParamPoint origin = ParamPoint::zeros(qspec.dim1, qspec.dim2);

    SeedOutputs& out = outputs[static_cast<std::size_t>(seed)];
    Trajectory pub_traj = run_gd(loss, pub, gd, origin);
    out.points[0] = pub_traj.final_point;
    out.proj_violations[0] = pub_traj.projection_violations;

    Trajectory priv_traj =
        run_dpsgd(loss, priv, dp, origin, base.child("arm_private"));
    out.points[1] = priv_traj.final_point;
    out.proj_violations[1] = priv_traj.projection_violations;

    Trajectory mixed_traj = run_dpsgd(loss, priv, dp, pub_traj.final_point,
                                      base.child("arm_mixed"));
    out.points[2] = mixed_traj.final_point;
    out.max_disp[2] = mixed_traj.max_block1_displacement;
    out.proj_violations[2] =
        pub_traj.projection_violations + mixed_traj.projection_violations;
    tasks[static_cast<std::size_t>(seed)] = std::move(task);
  }

  return assemble_report("quadratic", config, root_seed, outputs, tasks,
                         mc_streams, /*quadratic=*/true);
}

ScheduleConfig ScheduleConfig::default_config() {
  ScheduleConfig config;
  config.spec = BasinLossSpec::desk_default();
  config.spec.r = 0.1;
  config.n_priv = 256;
  config.dp.epsilon = 0.2;
  config.dp.delta = 1e-4;
  config.dp.m = 1.0;
  config.dp.L = 3.0;
  config.dp.T = 0;
  config.dp.sigma = -1.0;
  config.seeds = 20;
  return config;
}

void ScheduleConfig::resolve() {
  spec.validate();
  dp.n = n_priv;
  if (dp.T == 0) dp.T = n_priv * n_priv;
  ProjectionPair projection;
  projection.block2 = BlockProjection::ball(spec.r);
  dp.projection = projection;
}

namespace {

NoiseSchedule two_phase(long T, double first_mult, long first_len,
                        double second_mult) {
  NoiseSchedule schedule;
  schedule.phases.push_back({first_len, first_mult});
  if (T - first_len > 0) schedule.phases.push_back({T - first_len, second_mult});
  return schedule;
}

}  // namespace

NoiseSchedule ScheduleConfig::front_loaded() const {
  const long T = dp.resolved_T();
  const long first = std::max<long>(1, static_cast<long>(split * T));
  return two_phase(T, low_mult, first, high_mult);
}

NoiseSchedule ScheduleConfig::back_loaded() const {
  const long T = dp.resolved_T();
  const long first = std::max<long>(1, T - static_cast<long>(split * T));
  return two_phase(T, high_mult, first, low_mult);
}

NoiseSchedule ScheduleConfig::uniform() const {
  // Alternate the low and high multipliers step by step: the same multiset
  // as the front/back schedules, spread evenly in time.
  const long T = dp.resolved_T();
  const long low_total = std::max<long>(1, static_cast<long>(split * T));
  NoiseSchedule schedule;
  schedule.phases.reserve(static_cast<std::size_t>(T));
  long low_used = 0;
  for (long t = 0; t < T; ++t) {
    if (t % 2 == 0 && low_used < low_total) {
      schedule.phases.push_back({1, low_mult});
      ++low_used;
    } else {
      schedule.phases.push_back({1, high_mult});
    }
  }
  return schedule;
}

ExperimentReport run_schedule_comparison(const ScheduleConfig& base_config,
                                         std::uint64_t root_seed) {
  ScheduleConfig config = base_config;
  config.resolve();
  config.dp.validate();
  if (config.seeds < 1) {
    throw std::invalid_argument("ScheduleConfig: seeds must be >= 1");
  }

  struct Variant {
    const char* name;
    NoiseSchedule schedule;
  };
  std::vector<Variant> variants;
  variants.push_back({"front_loaded", config.front_loaded()});
  variants.push_back({"back_loaded", config.back_loaded()});
  variants.push_back({"uniform", config.uniform()});
  for (const Variant& v : variants) {
    if (!equal_noise_budget(variants[0].schedule, v.schedule)) {
      throw std::invalid_argument(
          "run_schedule_comparison: schedules must spend equal noise budgets");
    }
  }

  const int seeds = config.seeds;
  std::vector<std::array<ParamPoint, 3>> points(
      static_cast<std::size_t>(seeds));
  std::vector<TaskInstance> tasks(static_cast<std::size_t>(seeds));

#pragma omp parallel for schedule(dynamic)
  for (int seed = 0; seed < seeds; ++seed) {
    RngStream base = derive_stream(root_seed, {"sched", seed});
    TaskInstance task =
        make_task(config.spec, TaskMode::id, config.rho, base.child("task"));
    RngStream priv_stream = base.child("priv");
    Dataset priv =
        sample_dataset(task.priv_dist, priv_stream,
                       static_cast<std::size_t>(config.n_priv),
                       DataOrigin::private_data);
    const BasinLoss loss(config.spec);
    const ParamPoint origin =
        ParamPoint::zeros(config.spec.dim1, config.spec.dim2);
    for (std::size_t v = 0; v < variants.size(); ++v) {
      DpSgdConfig dp = config.dp;
      dp.schedule = variants[v].schedule;
      // All variants replay the same sampling and noise stream, so the
      // comparison is paired: only the multipliers differ.
      points[static_cast<std::size_t>(seed)][v] =
          run_dpsgd(loss, priv, dp, origin, base.child("dpsgd")).final_point;
    }
    tasks[static_cast<std::size_t>(seed)] = std::move(task);
  }

  ExperimentReport report;
  report.experiment = "schedule";
  report.mode = TaskMode::id;
  report.root_seed = root_seed;
  for (int seed = 0; seed < seeds; ++seed) {
    const TaskInstance& task = tasks[static_cast<std::size_t>(seed)];
    RngStream mc_base = derive_stream(root_seed, {"sched", seed, "mc"});
    for (std::size_t v = 0; v < variants.size(); ++v) {
      const ParamPoint& theta = points[static_cast<std::size_t>(seed)][v];
      const RiskResult risk =
          excess_risk(config.spec, task, theta, config.evaluator, config.n_mc,
                      mc_base.child(variants[v].name));
      ArmRecord rec;
      rec.seed = seed;
      rec.arm = variants[v].name;
      rec.excess_risk = risk.excess;
      rec.evaluator = risk.evaluator;
      rec.basin_hit = in_basin(config.spec, theta.theta1);
      rec.block1_final_norm = norm(theta.theta1);
      rec.block2_dist_to_mu2 = distance(theta.theta2, task.mu2);
      report.records.push_back(std::move(rec));
    }
  }
  report.summary = summarize(report.records,
                             {"front_loaded", "back_loaded", "uniform"});
  return report;
}

CalibrationReport calibrate_basin_landing(const BasinLossSpec& spec,
                                          const std::vector<long>& n_pub_grid,
                                          long trials, double margin_frac,
                                          double rho,
                                          std::uint64_t root_seed) {
  spec.validate();
  if (trials < 1) {
    throw std::invalid_argument("calibrate_basin_landing: trials must be >= 1");
  }
  CalibrationReport report;
  report.margin_frac = margin_frac;
  report.root_seed = root_seed;
  for (long n_pub : n_pub_grid) {
    if (n_pub < 1) {
      throw std::invalid_argument(
          "calibrate_basin_landing: n_pub grid entries must be >= 1");
    }
    std::vector<unsigned char> landed(static_cast<std::size_t>(trials), 0);
    std::vector<unsigned char> with_margin(static_cast<std::size_t>(trials), 0);
#pragma omp parallel for schedule(dynamic)
    for (long trial = 0; trial < trials; ++trial) {
      RngStream base = derive_stream(root_seed, {"cal", n_pub, trial});
      TaskInstance task =
          make_task(spec, TaskMode::id, rho, base.child("task"));
      RngStream pub_stream = base.child("pub");
      Dataset pub = sample_dataset(task.pub_dist, pub_stream,
                                   static_cast<std::size_t>(n_pub),
                                   DataOrigin::public_data);
      const ParamPoint theta = algo_public_only(task, pub);
      const double n1 = norm(theta.theta1);
      if (annulus_distance(n1, spec.M, spec.R1) == 0.0) {
        landed[static_cast<std::size_t>(trial)] = 1;
        const double margin =
            std::min(n1 - (spec.M - spec.R1), (spec.M + spec.R1) - n1);
        if (margin >= margin_frac * spec.R1) {
          with_margin[static_cast<std::size_t>(trial)] = 1;
        }
      }
    }
    CalibrationRow row;
    row.n_pub = n_pub;
    row.trials = trials;
    long land_count = 0;
    long margin_count = 0;
    for (long trial = 0; trial < trials; ++trial) {
      land_count += landed[static_cast<std::size_t>(trial)];
      margin_count += with_margin[static_cast<std::size_t>(trial)];
    }
    row.landing_rate =
        static_cast<double>(land_count) / static_cast<double>(trials);
    row.margin_rate =
        static_cast<double>(margin_count) / static_cast<double>(trials);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace basinsep
