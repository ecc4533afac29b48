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

#include "basinsep/cli.hpp"

#include <filesystem>
#include <ostream>

#include "basinsep/csv.hpp"
#include "basinsep/selftest.hpp"

namespace basinsep {
namespace {

namespace fs = std::filesystem;

std::string out_path(const RunConfig& config, const char* name) {
  return (fs::path(config.out_dir) / name).string();
}

void write_manifest(const RunConfig& config) {
  write_file(out_path(config, "manifest.txt"), manifest_text(config));
}

void log_summaries(const ExperimentReport& report, std::ostream& log) {
  for (const ArmSummary& s : report.summary) {
    log << "  " << s.arm << ": median excess " << format_double(s.median)
        << " (q25 " << format_double(s.q25) << ", q75 "
        << format_double(s.q75) << ", n " << s.n << ")\n";
  }
}

std::string datasets_csv(const RunConfig& config, bool quadratic) {
  std::string out = "seed,origin,index,d1_norm,d2_norm\n";
  const SeparationConfig& sep = config.sep;
  for (int seed = 0; seed < sep.seeds; ++seed) {
    RngStream base =
        quadratic ? quadratic_base_stream(config.root_seed, seed)
                  : separation_base_stream(config.root_seed, sep.mode, seed);
    TaskInstance task =
        make_task(sep.spec, sep.mode, sep.rho, base.child("task"));
    RngStream pub_stream = base.child("pub");
    Dataset pub = sample_dataset(task.pub_dist, pub_stream,
                                 static_cast<std::size_t>(sep.n_pub),
                                 DataOrigin::public_data);
    RngStream priv_stream = base.child("priv");
    Dataset priv = sample_dataset(task.priv_dist, priv_stream,
                                  static_cast<std::size_t>(sep.n_priv),
                                  DataOrigin::private_data);
    for (const Dataset* data : {&pub, &priv}) {
      const char* origin =
          data->origin == DataOrigin::public_data ? "public" : "private";
      for (std::size_t i = 0; i < data->points.size(); ++i) {
        out += std::to_string(seed);
        out += ',';
        out += origin;
        out += ',';
        out += std::to_string(i);
        out += ',';
        out += format_double(norm(data->points[i].d1));
        out += ',';
        out += format_double(norm(data->points[i].d2));
        out += '\n';
      }
    }
  }
  return out;
}

int cmd_arm_experiment(RunConfig config, bool quadratic, std::ostream& log) {
  config.sep.resolve();
  config.sep.dp.sigma = config.sep.dp.resolved_sigma();
  config.sep.validate();
  write_manifest(config);
  const ExperimentReport report =
      quadratic ? run_quadratic_separation(config.sep, config.root_seed)
                : run_separation(config.sep, config.root_seed);
  write_file(out_path(config, "records.csv"), records_csv(report));
  write_file(out_path(config, "summary.csv"), summary_csv(report));
  if (config.dump_data) {
    write_file(out_path(config, "datasets.csv"),
               datasets_csv(config, quadratic));
  }
  log << report.experiment << " (" << task_mode_name(report.mode) << ", "
      << config.sep.seeds << " seeds)\n";
  log_summaries(report, log);
  log << "  dp: sigma " << format_double(config.sep.dp.sigma)
      << ", heuristic accounted epsilon "
      << format_double(account_epsilon(
             config.sep.dp.sigma / config.sep.dp.L, config.sep.dp.resolved_T(),
             config.sep.dp.n, config.sep.dp.delta))
      << " (target " << format_double(config.sep.dp.epsilon)
      << "; indicator only, not a certified bound)\n";
  long violations = 0;
  for (const ArmRecord& rec : report.records) {
    violations += rec.projection_violations;
  }
  if (violations > 0) {
    log << "error: " << violations << " projection violations\n";
    return 1;
  }
  return 0;
}

int cmd_schedule(RunConfig config, std::ostream& log) {
  config.sched.resolve();
  config.sched.dp.sigma = config.sched.dp.resolved_sigma();
  write_manifest(config);
  const ExperimentReport report =
      run_schedule_comparison(config.sched, config.root_seed);
  write_file(out_path(config, "records.csv"), records_csv(report));
  write_file(out_path(config, "summary.csv"), summary_csv(report));
  log << "schedule comparison (" << config.sched.seeds << " seeds, noise "
      << "energy per schedule "
      << format_double(config.sched.front_loaded().energy() *
                       config.sched.dp.sigma * config.sched.dp.sigma)
      << ")\n";
  log_summaries(report, log);
  return 0;
}

int cmd_landscape(const RunConfig& config, std::ostream& log) {
  const LandscapeConfig& land = config.land;
  land.spec.validate();
  write_manifest(config);
  DataPoint d;
  d.d1 = RealVector(std::vector<double>{land.d1});
  d.d2 = RealVector(std::vector<double>{land.d2});

  const bool want_slice = land.kinds.find("slice") != std::string::npos;
  const bool want_heatmap = land.kinds.find("heatmap") != std::string::npos;
  const bool want_plane = land.kinds.find("plane") != std::string::npos;

  if (want_slice) {
    const std::vector<GridResult> slices =
        slice_1d(land.spec, d, land.theta2_slices, land.range1);
    std::string csv = "theta1,theta2,value\n";
    for (const GridResult& slice : slices) {
      std::string body = grid_csv(slice);
      csv += body.substr(body.find('\n') + 1);
    }
    write_file(out_path(config, "slice.csv"), csv);
    const std::vector<long> minima = local_minima(slices.front());
    log << "slice at theta2 = " << format_double(land.theta2_slices.front())
        << ": " << minima.size() << " local minima at theta1 in {";
    for (std::size_t i = 0; i < minima.size(); ++i) {
      if (i) log << ", ";
      log << format_double(slices.front().axis1.at(minima[i]));
    }
    log << "}\n";
  }
  if (want_heatmap) {
    const GridResult heat = heatmap_2d(land.spec, d, land.range1, land.range2);
    write_file(out_path(config, "heatmap.csv"), grid_csv(heat));
    long best = 0;
    for (long k = 1; k < land.range1.n * land.range2.n; ++k) {
      if (heat.values[static_cast<std::size_t>(k)] <
          heat.values[static_cast<std::size_t>(best)]) {
        best = k;
      }
    }
    log << "heatmap argmin cell at (theta1, theta2) = ("
        << format_double(heat.axis1.at(best / land.range2.n)) << ", "
        << format_double(heat.axis2.at(best % land.range2.n)) << ")\n";
  }
  if (want_plane) {
    // Mini separation run: oracle (population minimizer), public-only, and
    // private-only arms on the configured spec, then the loss plane through
    // the three points.
    SeparationConfig sep;
    sep.spec = land.spec;
    sep.n_pub = 32;
    sep.n_priv = 64;
    sep.seeds = 1;
    sep.dp.epsilon = 1.0;
    sep.dp.delta = 1e-4;
    sep.dp.m = -1.0;
    sep.dp.L = -1.0;
    sep.dp.T = 0;
    sep.dp.sigma = -1.0;
    sep.resolve();
    RngStream base = separation_base_stream(config.root_seed, sep.mode, 0);
    TaskInstance task =
        make_task(sep.spec, sep.mode, sep.rho, base.child("task"));
    RngStream pub_stream = base.child("pub");
    Dataset pub = sample_dataset(task.pub_dist, pub_stream,
                                 static_cast<std::size_t>(sep.n_pub),
                                 DataOrigin::public_data);
    RngStream priv_stream = base.child("priv");
    Dataset priv = sample_dataset(task.priv_dist, priv_stream,
                                  static_cast<std::size_t>(sep.n_priv),
                                  DataOrigin::private_data);
    const ParamPoint oracle = task.minimizer();
    const ParamPoint pub_point = algo_public_only(task, pub);
    const ParamPoint priv_point =
        algo_private_only(task, priv, sep.dp, base.child("arm_private"));
    const BasinLoss loss(sep.spec);
    PointEvaluator eval = [&](const ParamPoint& theta) {
      const ClosedFormResult cf =
          population_loss_closed_form(sep.spec, task, theta);
      if (cf.valid) return cf.value;
      RngStream mc = base.child("plane_mc");
      return population_loss_mc(loss, task.priv_dist, theta, 20000, mc)
          .estimate;
    };
    const AxisSpec axis{-land.plane_margin, 1.0 + land.plane_margin,
                        land.plane_res};
    const GridResult plane =
        interpolation_plane(eval, oracle, pub_point, priv_point, axis, axis);
    write_file(out_path(config, "plane.csv"), grid_csv(plane));
    log << "plane corners: oracle " << format_double(eval(oracle))
        << ", public_only " << format_double(eval(pub_point))
        << ", private_only " << format_double(eval(priv_point)) << "\n";
  }
  return 0;
}

int cmd_calibrate(const RunConfig& config, std::ostream& log) {
  config.cal.spec.validate();
  write_manifest(config);
  const CalibrationReport report = calibrate_basin_landing(
      config.cal.spec, config.cal.n_pub_grid, config.cal.trials,
      config.cal.margin_frac, config.cal.rho, config.root_seed);
  write_file(out_path(config, "calibration.csv"), calibration_csv(report));
  for (const CalibrationRow& row : report.rows) {
    log << "  n_pub " << row.n_pub << ": landing rate "
        << format_double(row.landing_rate) << ", margin rate "
        << format_double(row.margin_rate) << "\n";
  }
  return 0;
}

}  // namespace

int run_command(const RunConfig& config, std::ostream& log) {
  try {
    if (config.command != Command::selftest) {
      fs::create_directories(config.out_dir);
    }
    switch (config.command) {
      case Command::separation:
        return cmd_arm_experiment(config, /*quadratic=*/false, log);
      case Command::quadratic:
        return cmd_arm_experiment(config, /*quadratic=*/true, log);
      case Command::schedule:
        return cmd_schedule(config, log);
      case Command::landscape:
        return cmd_landscape(config, log);
      case Command::calibrate:
        return cmd_calibrate(config, log);
      case Command::selftest: {
        const SelftestResult result = run_selftests(log);
        return result.failed == 0 ? 0 : 1;
      }
    }
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace basinsep
