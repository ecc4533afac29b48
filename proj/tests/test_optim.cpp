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

#include <cmath>

#include "basinsep/distributions.hpp"
#include "basinsep/experiments.hpp"
#include "basinsep/loss.hpp"
#include "basinsep/optim.hpp"

using namespace basinsep;

namespace {

Dataset sample_task_data(const TaskInstance& task, std::uint64_t seed,
                         std::size_t n, DataOrigin origin) {
  RngStream stream = derive_stream(seed, {"data"});
  const ProductDistribution& dist =
      origin == DataOrigin::public_data ? task.pub_dist : task.priv_dist;
  return sample_dataset(dist, stream, n, origin);
}

}  // namespace

TEST_CASE("run_gd: one step from the origin hits the public empirical mean") {
  const BasinLossSpec spec = BasinLossSpec::desk_default();
  RngStream stream = derive_stream(17, {"task"});
  TaskInstance task = make_task(spec, TaskMode::id, 0.5, stream);
  Dataset pub = sample_task_data(task, 17, 32, DataOrigin::public_data);

  const BasinLoss loss(spec);
  GdConfig config;
  config.steps = 1;
  config.step_size = 1.0;
  const Trajectory traj =
      run_gd(loss, pub, config, ParamPoint::zeros(spec.dim1, spec.dim2));

  // independent mean computation, same summation order
  RealVector mean(spec.dim1);
  for (const DataPoint& d : pub.points) {
    for (std::size_t i = 0; i < spec.dim1; ++i) mean[i] += -d.d1[i];
  }
  for (std::size_t i = 0; i < spec.dim1; ++i) {
    mean[i] = 0.0 - 1.0 * (mean[i] / static_cast<double>(pub.points.size()));
    CHECK(traj.final_point.theta1[i] == mean[i]);
  }
  CHECK(squared_norm(traj.final_point.theta2) == 0.0);
}

TEST_CASE("run_gd: contraction on a pure quadratic and zero steps") {
  QuadraticLossSpec spec;
  spec.p = 1;
  spec.dim1 = 3;
  spec.dim2 = 1;
  spec.r = 1.0;
  spec.radius2 = 1.0;
  const QuadraticLoss loss(spec);

  Dataset data;
  data.origin = DataOrigin::public_data;
  DataPoint d;
  d.d1 = RealVector(std::vector<double>{1.0, -2.0, 0.5});
  d.d2 = RealVector(1);
  data.points.push_back(d);

  ParamPoint theta0 = ParamPoint::zeros(3, 1);
  GdConfig config;
  config.steps = 10;
  config.step_size = 0.25;
  const Trajectory traj = run_gd(loss, data, config, theta0);
  const double expected = std::pow(0.75, 10) * distance(theta0.theta1, d.d1);
  CHECK(distance(traj.final_point.theta1, d.d1) ==
        doctest::Approx(expected).epsilon(1e-12));

  config.steps = 0;
  const Trajectory none = run_gd(loss, data, config, theta0);
  CHECK(param_distance(none.final_point, theta0) == 0.0);
}

TEST_CASE("calibrate_sigma: hand values and homogeneity") {
  CHECK(calibrate_sigma(1.0, std::exp(-1.0), 1.0, 1, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const double base = calibrate_sigma(1.0, 1e-4, 3.0, 100, 1.0);
  CHECK(calibrate_sigma(1.0, 1e-4, 3.0, 200, 1.0) ==
        doctest::Approx(0.5 * base).epsilon(1e-12));
  CHECK(calibrate_sigma(1.0, 1e-4, 0.0, 100, 1.0) == 0.0);
  CHECK_THROWS(calibrate_sigma(1.0, 1.5, 1.0, 1, 1.0));
  CHECK_THROWS(calibrate_sigma(1.0, 0.0, 1.0, 1, 1.0));
}

TEST_CASE("run_dpsgd: noise-free contraction toward a point mass") {
  QuadraticLossSpec spec;
  spec.p = 4;
  spec.dim1 = 1;
  spec.dim2 = 8;
  spec.r = 0.1;
  spec.radius2 = 1.0;
  const QuadraticLoss loss(spec);

  RealVector point(8);
  point[0] = 0.02;
  ProductDistribution pm{PointMass::at_origin(1), PointMass(point)};
  RngStream data_stream = derive_stream(17, {"pmdata"});
  Dataset data = sample_dataset(pm, data_stream, 8, DataOrigin::private_data);

  DpSgdConfig dp;
  dp.n = 8;
  dp.m = static_cast<double>(spec.p) / (spec.r * spec.r);
  dp.L = 1e9;
  dp.T = 128;
  dp.sigma = 0.0;

  ParamPoint theta0 = ParamPoint::zeros(1, 8);
  theta0.theta2[3] = 0.05;
  const double initial = distance(theta0.theta2, point);
  const Trajectory traj =
      run_dpsgd(loss, data, dp, theta0, derive_stream(17, {"run"}));
  CHECK(distance(traj.final_point.theta2, point) <=
        initial / static_cast<double>(dp.T) + 1e-15);
}

TEST_CASE("run_dpsgd: clipping preserves direction and caps magnitude") {
  QuadraticLossSpec spec;
  spec.p = 1;
  spec.dim1 = 1;
  spec.dim2 = 4;
  spec.r = 1.0;
  spec.radius2 = 10.0;
  const QuadraticLoss loss(spec);

  RealVector point(4);
  point[0] = 8.0;
  ProductDistribution pm{PointMass::at_origin(1), PointMass(point)};
  RngStream data_stream = derive_stream(17, {"clipdata"});
  Dataset data = sample_dataset(pm, data_stream, 4, DataOrigin::private_data);

  DpSgdConfig dp;
  dp.n = 4;
  dp.m = 1.0;
  dp.L = 0.5;  // far below every true gradient norm
  dp.T = 5;
  dp.sigma = 0.0;

  TrajectoryOptions opts;
  opts.thin_every = 1;
  ParamPoint theta0 = ParamPoint::zeros(1, 4);
  const Trajectory traj =
      run_dpsgd(loss, data, dp, theta0, derive_stream(17, {"cliprun"}), opts);
  REQUIRE(traj.thinned.size() == 5);
  ParamPoint prev = theta0;
  for (std::size_t t = 0; t < traj.thinned.size(); ++t) {
    const double eta = 1.0 / static_cast<double>(t + 1);
    const ParamPoint& cur = traj.thinned[t];
    const double step_norm = param_distance(cur, prev);
    CHECK(step_norm == doctest::Approx(eta * dp.L).epsilon(1e-9));
    // direction: toward the point, i.e. along (point - prev.theta2)
    RealVector step = sub(cur.theta2, prev.theta2);
    RealVector want = sub(point, prev.theta2);
    const double cosine =
        dot(step, want) / (norm(step) * norm(want));
    CHECK(cosine == doctest::Approx(1.0).epsilon(1e-9));
    prev = cur;
  }
}

TEST_CASE("run_dpsgd: determinism and config validation") {
  const BasinLossSpec spec = BasinLossSpec::desk_scaled(2);
  const BasinLoss loss(spec);
  RngStream stream = derive_stream(17, {"det"});
  TaskInstance task = make_task(spec, TaskMode::id, 0.5, stream);
  Dataset priv = sample_task_data(task, 18, 16, DataOrigin::private_data);

  DpSgdConfig dp;
  dp.n = 16;
  dp.m = 1.0;
  dp.L = 3.0;
  dp.T = 200;
  dp.epsilon = 1.0;
  dp.delta = 1e-4;
  dp.sigma = -1.0;  // calibrate

  const Trajectory a = run_dpsgd(loss, priv, dp, ParamPoint::zeros(spec.dim1, spec.dim2),
                                 derive_stream(99, {"sgd"}));
  const Trajectory b = run_dpsgd(loss, priv, dp, ParamPoint::zeros(spec.dim1, spec.dim2),
                                 derive_stream(99, {"sgd"}));
  CHECK(param_distance(a.final_point, b.final_point) == 0.0);

  DpSgdConfig wrong = dp;
  wrong.n = 15;
  CHECK_THROWS(run_dpsgd(loss, priv, wrong,
                         ParamPoint::zeros(spec.dim1, spec.dim2),
                         derive_stream(99, {"sgd"})));
}

TEST_CASE("run_dpsgd: projection keeps every iterate in the constraint set") {
  QuadraticLossSpec spec;
  spec.p = 4;
  spec.dim1 = 2;
  spec.dim2 = 3;
  spec.r = 0.05;
  spec.radius1 = 1.0;
  spec.radius2 = 0.05;
  const QuadraticLoss loss(spec);
  RngStream stream = derive_stream(17, {"proj"});
  SignMeanDistribution d2 =
      make_public_hard_instance(3, spec.r, 0.5, stream.child("mk"));
  ProductDistribution dist{PointMass::at_origin(2), d2};
  RngStream data_stream = stream.child("data");
  Dataset data = sample_dataset(dist, data_stream, 32, DataOrigin::private_data);

  DpSgdConfig dp;
  dp.n = 32;
  dp.m = static_cast<double>(spec.p) / (spec.r * spec.r);
  dp.L = 3.0 * spec.p / spec.r + 3.0;
  dp.T = 1024;
  dp.sigma = calibrate_sigma(1.0, 1e-4, dp.L, 32, 1.0);
  dp.projection = ProjectionPair{BlockProjection::ball(spec.radius1),
                                 BlockProjection::ball(spec.radius2)};

  TrajectoryOptions opts;
  opts.thin_every = 16;
  const Trajectory traj = run_dpsgd(loss, data, dp,
                                    ParamPoint::zeros(2, 3),
                                    stream.child("run"), opts);
  CHECK(traj.projection_violations == 0);
  for (const ParamPoint& it : traj.thinned) {
    CHECK(norm(it.theta1) <= spec.radius1 * (1.0 + 1e-12));
    CHECK(norm(it.theta2) <= spec.radius2 * (1.0 + 1e-12));
  }
}

TEST_CASE("run_dpsgd: ball containment on the isolated quadratic block") {
  // Quadratic block of dimension 16 around a point mass; the iterate must
  // stay within max{2 sqrt(dim) sigma / m, ||theta0 - theta*||} of the
  // minimizer throughout, for nearly every seed.
  QuadraticLossSpec spec;
  spec.p = 4;
  spec.dim1 = 1;
  spec.dim2 = 16;
  spec.r = 0.1;
  spec.radius2 = 1.0;
  const QuadraticLoss loss(spec);
  const double m = static_cast<double>(spec.p) / (spec.r * spec.r);

  RealVector target(16);
  target[0] = 0.03;
  target[1] = -0.04;
  ProductDistribution pm{PointMass::at_origin(1), PointMass(target)};

  DpSgdConfig dp;
  dp.n = 100;
  dp.m = m;
  dp.L = 40.0;
  dp.T = 10000;
  dp.sigma = calibrate_sigma(1.0, 1e-4, dp.L, dp.n, 1.0);

  const double bound = std::max(2.0 * std::sqrt(16.0) * dp.sigma / m, 0.05);
  int violated_runs = 0;
  for (int run = 0; run < 100; ++run) {
    RngStream base = derive_stream(23, {"containment", run});
    RngStream data_stream = base.child("data");
    Dataset data =
        sample_dataset(pm, data_stream, 100, DataOrigin::private_data);
    TrajectoryOptions opts;
    opts.containment = Block2Containment{target, bound};
    const Trajectory traj = run_dpsgd(loss, data, dp, ParamPoint::zeros(1, 16),
                                      base.child("sgd"), opts);
    if (traj.containment_violations > 0) ++violated_runs;
  }
  CHECK(violated_runs <= 1);  // >= 99% of runs contained
}

TEST_CASE("noise schedules: budgets, uniform equivalence, energy") {
  ScheduleConfig config = ScheduleConfig::default_config();
  config.n_priv = 8;
  config.dp.T = 64;
  CHECK(equal_noise_budget(config.front_loaded(), config.back_loaded()));
  CHECK(equal_noise_budget(config.front_loaded(), config.uniform()));
  CHECK(config.front_loaded().energy() ==
        doctest::Approx(config.back_loaded().energy()).epsilon(1e-12));

  // all-ones schedule reproduces the plain run exactly
  const BasinLossSpec spec = BasinLossSpec::desk_scaled(2);
  const BasinLoss loss(spec);
  RngStream stream = derive_stream(17, {"sched"});
  TaskInstance task = make_task(spec, TaskMode::id, 0.5, stream);
  Dataset priv = sample_task_data(task, 19, 8, DataOrigin::private_data);
  DpSgdConfig dp;
  dp.n = 8;
  dp.m = 1.0;
  dp.L = 3.0;
  dp.T = 64;
  dp.sigma = 0.05;
  const Trajectory plain =
      run_dpsgd(loss, priv, dp, ParamPoint::zeros(spec.dim1, spec.dim2),
                derive_stream(101, {"s"}));
  DpSgdConfig with_ones = dp;
  NoiseSchedule ones;
  ones.phases.push_back({64, 1.0});
  with_ones.schedule = ones;
  const Trajectory scheduled =
      run_dpsgd(loss, priv, with_ones, ParamPoint::zeros(spec.dim1, spec.dim2),
                derive_stream(101, {"s"}));
  CHECK(param_distance(plain.final_point, scheduled.final_point) == 0.0);

  // mismatched length rejected
  DpSgdConfig bad = dp;
  NoiseSchedule short_schedule;
  short_schedule.phases.push_back({32, 1.0});
  bad.schedule = short_schedule;
  CHECK_THROWS(run_dpsgd(loss, priv, bad,
                         ParamPoint::zeros(spec.dim1, spec.dim2),
                         derive_stream(101, {"s"})));
}

TEST_CASE("account_epsilon: limits and monotonicity") {
  CHECK(account_epsilon(1.0, 0, 100, 1e-5) == 0.0);
  const double eps = account_epsilon(2.0, 1000, 100, 1e-5);
  CHECK(eps > 0.0);
  CHECK(account_epsilon(2.0, 2000, 100, 1e-5) > eps);
  CHECK(account_epsilon(200.0, 1000, 100, 1e-5) < 0.05 * eps);
  CHECK(account_epsilon(1e9, 1000, 100, 1e-5) ==
        doctest::Approx(0.0).epsilon(1e-6));
  CHECK_THROWS(account_epsilon(1.0, 10, 100, 2.0));
}
