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

#include "basinsep/selftest.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <vector>

#include "basinsep/csv.hpp"
#include "basinsep/distributions.hpp"
#include "basinsep/experiments.hpp"
#include "basinsep/landscape.hpp"
#include "basinsep/loss.hpp"
#include "basinsep/optim.hpp"
#include "basinsep/stats.hpp"
#include "basinsep/testing.hpp"

namespace basinsep {
namespace {

constexpr std::uint64_t kSelftestSeed = 0x5e1f7e57;

RealVector random_vector(RngStream& stream, std::size_t dim, double sigma) {
  return gaussian_vector(stream, dim, sigma);
}

bool check_rng_determinism() {
  RngStream a = derive_stream(42, {"sep", "mixed", 0});
  RngStream b = derive_stream(42, {"sep", "mixed", 0});
  RngStream c = derive_stream(42, {"sep", "mixed", 1});
  bool first_differs = false;
  for (int i = 0; i < 1024; ++i) {
    const std::uint64_t va = a.next_u64();
    if (va != b.next_u64()) return false;
    if (va != c.next_u64()) first_differs = true;
  }
  RngStream root = derive_stream(42, {});
  (void)root.uniform();
  return first_differs;
}

bool check_projection_properties() {
  RngStream stream = derive_stream(kSelftestSeed, {"proj"});
  const double M = 0.5, R1 = 0.1;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 1 + stream.uniform_index(6);
    RealVector v = random_vector(stream, dim, 1.0);
    RealVector w = random_vector(stream, dim, 1.0);
    // idempotence
    const RealVector pb = project_ball(v, 0.7);
    if (distance(project_ball(pb, 0.7), pb) > 1e-14) return false;
    const RealVector pa = project_annulus(v, M, R1);
    if (distance(project_annulus(pa, M, R1), pa) > 1e-14) return false;
    // ball projection is 1-Lipschitz
    if (distance(project_ball(v, 0.7), project_ball(w, 0.7)) >
        distance(v, w) * (1.0 + 1e-12)) {
      return false;
    }
    // projected point lies in the target set
    if (norm(pb) > 0.7 * (1.0 + 1e-12)) return false;
    if (annulus_distance(norm(pa), M, R1) > 1e-12) return false;
  }
  // brute-force optimality in dims 1 and 2
  for (std::size_t dim : {1u, 2u}) {
    for (int trial = 0; trial < 50; ++trial) {
      RealVector v = random_vector(stream, dim, 0.8);
      if (norm(v) == 0.0) continue;
      const double proj_dist = distance(v, project_annulus(v, M, R1));
      const double brute = testing::annulus_distance_brute(v, M, R1, 400);
      if (proj_dist > brute + 1e-6) return false;
    }
  }
  // the zero vector maps to the deterministic tie-break point
  RealVector zero(3);
  const RealVector pz = project_annulus(zero, M, R1);
  return pz[0] == M - R1 && pz[1] == 0.0 && pz[2] == 0.0;
}

bool check_gaussian_stats() {
  RngStream stream = derive_stream(kSelftestSeed, {"gauss"});
  const std::size_t dim = 10000;
  const RealVector v = gaussian_vector(stream, dim, 1.0);
  double mean = 0.0;
  for (std::size_t i = 0; i < dim; ++i) mean += v[i];
  mean /= static_cast<double>(dim);
  if (std::abs(mean) > 4.0 / std::sqrt(static_cast<double>(dim))) return false;
  const RealVector w = gaussian_vector(stream, dim, 2.0);
  RunningMoments moments;
  for (std::size_t i = 0; i < dim; ++i) moments.add(w[i]);
  if (std::abs(moments.variance() - 4.0) > 0.4) return false;
  const RealVector z = gaussian_vector(stream, 16, 0.0);
  return squared_norm(z) == 0.0;
}

bool check_distribution_support_and_mean() {
  RngStream stream = derive_stream(kSelftestSeed, {"dist"});
  const BasinLossSpec spec = BasinLossSpec::desk_default();
  SignMeanDistribution d1 =
      make_private_hard_instance(spec.dim1, spec.M, stream.child("mk1"));
  SignMeanDistribution d2 =
      make_public_hard_instance(spec.dim2, spec.r, 0.5, stream.child("mk2"));
  if (std::abs(norm(d1.mean()) - spec.M) > 1e-12) return false;
  if (std::abs(norm(d2.mean()) - 0.5 * spec.r) > 1e-12 * spec.r) return false;

  const long n = 100000;
  RngStream sample_stream = stream.child("samples");
  std::vector<RunningMoments> coord(d2.dim());
  for (long k = 0; k < n; ++k) {
    const RealVector s = d2.sample(sample_stream);
    if (std::abs(norm(s) - d2.scale()) > 1e-12 * d2.scale()) return false;
    for (std::size_t i = 0; i < s.dim(); ++i) coord[i].add(s[i]);
  }
  for (std::size_t i = 0; i < d2.dim(); ++i) {
    const double se = coord[i].stderr_mean();
    if (std::abs(coord[i].mean - d2.mean()[i]) > 5.0 * se) return false;
  }
  RngStream s1 = stream.child("norm1");
  for (int k = 0; k < 100; ++k) {
    if (std::abs(norm(d1.sample(s1)) - 1.0) > 1e-12) return false;
  }
  return true;
}

bool check_loss_bounds_and_gate() {
  RngStream stream = derive_stream(kSelftestSeed, {"loss"});
  const BasinLossSpec spec = BasinLossSpec::desk_default();
  for (int trial = 0; trial < 500; ++trial) {
    ParamPoint theta(random_vector(stream, spec.dim1, 1.0),
                     random_vector(stream, spec.dim2, 2.0 * spec.r));
    DataPoint d{project_ball(random_vector(stream, spec.dim1, 0.6), 1.0),
                project_ball(random_vector(stream, spec.dim2, spec.r), spec.r)};
    const double l1 = ell1(spec, theta.theta1, d.d1);
    const double l2 = ell2(spec, theta.theta2, d.d2);
    const double q = q_gate(spec, theta.theta1);
    const double total = composite_loss(spec, theta, d);
    if (l1 < 0.0 || l1 > 4.5) return false;
    if (l2 < -4.5 || l2 > 0.0) return false;
    if (q < 0.0 || q > 1.0) return false;
    if (total < -4.5 * spec.p || total > 4.5) return false;
    // gate support: constant in theta2 once the gate is closed
    if (annulus_distance(norm(theta.theta1), spec.M, spec.R1) >= spec.R2) {
      ParamPoint perturbed = theta;
      perturbed.theta2 = random_vector(stream, spec.dim2, spec.r);
      if (composite_loss(spec, perturbed, d) != total) return false;
    }
    // q is (1/R2)-Lipschitz
    RealVector other = random_vector(stream, spec.dim1, 1.0);
    const double dq = std::abs(q_gate(spec, other) - q);
    if (dq > distance(other, theta.theta1) / spec.R2 * (1.0 + 1e-9)) {
      return false;
    }
    // q == 1 exactly when theta1 is in S
    const bool in_s =
        annulus_distance(norm(theta.theta1), spec.M, spec.R1) == 0.0;
    if ((q == 1.0) != in_s) return false;
  }
  return true;
}

bool check_gradients_vs_fd() {
  RngStream stream = derive_stream(kSelftestSeed, {"grad"});
  const BasinLossSpec spec = BasinLossSpec::desk_default();
  const BasinLoss basin(spec);
  for (int trial = 0; trial < 100; ++trial) {
    const testing::SmoothPoint pt =
        testing::random_smooth_point(spec, stream, 1e-3);
    const double err = testing::gradient_rel_error(basin, pt.theta, pt.d, 1e-6,
                                                   1e-6 * spec.r);
    if (err > 1e-5) return false;
  }
  const QuadraticLossSpec qspec = QuadraticLossSpec::from_basin(spec);
  const QuadraticLoss quad(qspec);
  for (int trial = 0; trial < 100; ++trial) {
    const testing::SmoothPoint pt =
        testing::random_quadratic_point(qspec, stream);
    const double err = testing::gradient_rel_error(quad, pt.theta, pt.d, 1e-6,
                                                   1e-6 * qspec.r);
    if (err > 1e-5) return false;
  }
  return true;
}

bool check_closed_form_vs_mc() {
  RngStream stream = derive_stream(kSelftestSeed, {"cfmc"});
  const BasinLossSpec spec = BasinLossSpec::desk_default();
  const BasinLoss loss(spec);
  TaskInstance task =
      make_task(spec, TaskMode::id, 0.5, stream.child("task"));
  for (int trial = 0; trial < 50; ++trial) {
    ParamPoint theta(
        project_ball(random_vector(stream, spec.dim1, 0.8), 1.9),
        project_ball(random_vector(stream, spec.dim2, spec.r), 1.9 * spec.r));
    const ClosedFormResult cf = population_loss_closed_form(spec, task, theta);
    if (!cf.valid) return false;
    const McResult mc = population_loss_mc(loss, task.priv_dist, theta, 100000,
                                           stream.child(trial));
    const double tol = 3.0 * std::max(mc.stderr_mean, 1e-12);
    if (std::abs(cf.value - mc.estimate) > tol) return false;
  }
  return true;
}

bool check_population_minimizer() {
  RngStream stream = derive_stream(kSelftestSeed, {"minimizer"});
  const BasinLossSpec spec = BasinLossSpec::desk_default();
  TaskInstance task = make_task(spec, TaskMode::id, 0.5, stream.child("task"));
  const ClosedFormResult at_star =
      population_loss_closed_form(spec, task, task.minimizer());
  if (!at_star.valid) return false;
  for (int trial = 0; trial < 1000; ++trial) {
    ParamPoint theta = task.minimizer();
    axpy(1.0, random_vector(stream, spec.dim1, 0.05), theta.theta1);
    axpy(1.0, random_vector(stream, spec.dim2, 0.3 * spec.r), theta.theta2);
    const ClosedFormResult cf = population_loss_closed_form(spec, task, theta);
    if (cf.valid && cf.value < at_star.value) return false;
  }
  return true;
}

bool check_dpsgd_mechanics() {
  RngStream stream = derive_stream(kSelftestSeed, {"dpsgd"});
  QuadraticLossSpec qspec;
  qspec.p = 4;
  qspec.dim1 = 1;
  qspec.dim2 = 8;
  qspec.r = 0.1;
  qspec.radius2 = 0.1;
  const QuadraticLoss loss(qspec);

  // noise-free run from a point mass dataset contracts to the point
  ProductDistribution pm{PointMass::at_origin(1), PointMass::at_origin(8)};
  RngStream data_stream = stream.child("data");
  Dataset data = sample_dataset(pm, data_stream, 4, DataOrigin::private_data);
  DpSgdConfig dp;
  dp.n = 4;
  dp.m = static_cast<double>(qspec.p) / (qspec.r * qspec.r);
  dp.L = 1e6;
  dp.T = 64;
  dp.sigma = 0.0;
  ParamPoint theta0 = ParamPoint::zeros(1, 8);
  theta0.theta2[0] = 0.05;
  Trajectory traj = run_dpsgd(loss, data, dp, theta0, stream.child("run"));
  const double final_dist = norm(traj.final_point.theta2);
  if (final_dist > 0.05 / static_cast<double>(dp.T) + 1e-12) return false;

  // determinism
  Trajectory traj2 = run_dpsgd(loss, data, dp, theta0, stream.child("run"));
  if (param_distance(traj.final_point, traj2.final_point) != 0.0) return false;

  // monotone descent, noise-free full batch (single example)
  Dataset one;
  one.origin = DataOrigin::private_data;
  DataPoint d0;
  d0.d1 = RealVector(1);
  d0.d2 = random_vector(stream, 8, 0.01);
  d0.d2 = project_ball(d0.d2, qspec.radius2);
  one.points.push_back(d0);
  DpSgdConfig dp1 = dp;
  dp1.n = 1;
  dp1.T = 50;
  TrajectoryOptions opts;
  opts.thin_every = 1;
  Trajectory mono = run_dpsgd(loss, one, dp1, theta0, stream.child("mono"), opts);
  double prev = quadratic_loss(qspec, theta0, d0);
  for (const ParamPoint& it : mono.thinned) {
    const double cur = quadratic_loss(qspec, it, d0);
    if (cur > prev + 1e-12) return false;
    prev = cur;
  }
  return true;
}

bool check_containment_lemma() {
  RngStream stream = derive_stream(kSelftestSeed, {"containment"});
  QuadraticLossSpec qspec;
  qspec.p = 4;
  qspec.dim1 = 1;
  qspec.dim2 = 16;
  qspec.r = 0.1;
  qspec.radius2 = 1.0;
  const QuadraticLoss loss(qspec);
  const double m = static_cast<double>(qspec.p) / (qspec.r * qspec.r);
  RealVector target(16);
  target[0] = 0.03;
  target[1] = -0.04;  // ||target|| = 0.05
  ProductDistribution pm{PointMass::at_origin(1), PointMass(target)};

  DpSgdConfig dp;
  dp.n = 100;
  dp.m = m;
  dp.L = 40.0;
  dp.T = 10000;
  dp.sigma = calibrate_sigma(1.0, 1e-4, dp.L, dp.n, 1.0);
  const double bound =
      std::max(2.0 * std::sqrt(16.0) * dp.sigma / m, 0.05);

  int violations = 0;
  for (int run = 0; run < 30; ++run) {
    RngStream run_stream = stream.child("run").child(run);
    RngStream data_stream = run_stream.child("data");
    Dataset data = sample_dataset(pm, data_stream, 100,
                                  DataOrigin::private_data);
    TrajectoryOptions opts;
    opts.containment = Block2Containment{target, bound};
    Trajectory traj = run_dpsgd(loss, data, dp, ParamPoint::zeros(1, 16),
                                run_stream.child("sgd"), opts);
    if (traj.containment_violations > 0) ++violations;
  }
  return violations == 0;
}

bool check_schedule_invariants() {
  ScheduleConfig config = ScheduleConfig::default_config();
  config.n_priv = 16;
  config.dp.T = 256;
  const NoiseSchedule front = config.front_loaded();
  const NoiseSchedule back = config.back_loaded();
  const NoiseSchedule uniform = config.uniform();
  if (!equal_noise_budget(front, back)) return false;
  if (!equal_noise_budget(front, uniform)) return false;
  if (std::abs(front.energy() - back.energy()) > 1e-9) return false;
  NoiseSchedule different = front;
  different.phases[0].multiplier *= 2.0;
  return !equal_noise_budget(front, different);
}

bool check_account_epsilon() {
  const double eps = account_epsilon(1.0, 100, 50, 1e-5);
  if (account_epsilon(1000.0, 100, 50, 1e-5) >= eps) return false;
  if (account_epsilon(1.0, 0, 50, 1e-5) != 0.0) return false;
  return account_epsilon(1.0, 200, 50, 1e-5) > eps;
}

bool check_csv_round_trip() {
  RngStream stream = derive_stream(kSelftestSeed, {"csv"});
  for (int trial = 0; trial < 1000; ++trial) {
    const double x = stream.gaussian(1.0) * std::pow(10.0, stream.uniform() * 20 - 10);
    const std::string s = format_double(x);
    if (std::stod(s) != x) return false;
  }
  return true;
}

bool check_grid_parallel_matches_serial() {
  const BasinLossSpec spec = BasinLossSpec::toy();
  DataPoint d;
  d.d1 = RealVector(std::vector<double>{0.5});
  d.d2 = RealVector(std::vector<double>{0.005});
  const AxisSpec a1{-1.0, 1.0, 101};
  const AxisSpec a2{-0.02, 0.03, 51};
  const GridResult parallel = heatmap_2d(spec, d, a1, a2);
  const GridResult serial = heatmap_2d_serial(spec, d, a1, a2);
  return parallel.values == serial.values;
}

bool check_mc_parallel_matches_serial() {
  RngStream stream = derive_stream(kSelftestSeed, {"mcpar"});
  const BasinLossSpec spec = BasinLossSpec::desk_default();
  const BasinLoss loss(spec);
  TaskInstance task = make_task(spec, TaskMode::id, 0.5, stream.child("task"));
  const ParamPoint theta = task.minimizer();
  const McResult par =
      population_loss_mc(loss, task.priv_dist, theta, 50000, stream.child("mc"));
  const McResult ser = population_loss_mc_serial(loss, task.priv_dist, theta,
                                                 50000, stream.child("mc"));
  return par.estimate == ser.estimate && par.stderr_mean == ser.stderr_mean;
}

}  // namespace

SelftestResult run_selftests(std::ostream& log) {
  struct Check {
    const char* name;
    std::function<bool()> fn;
  };
  const std::vector<Check> checks = {
      {"rng determinism and path distinctness", check_rng_determinism},
      {"projection idempotence, Lipschitz, brute-force optimality",
       check_projection_properties},
      {"gaussian vector statistics", check_gaussian_stats},
      {"distribution support and mean concentration",
       check_distribution_support_and_mean},
      {"loss bounds, gate support, gate Lipschitz", check_loss_bounds_and_gate},
      {"analytic gradients vs finite differences", check_gradients_vs_fd},
      {"closed-form population loss vs Monte Carlo", check_closed_form_vs_mc},
      {"population minimizer optimality spot check",
       check_population_minimizer},
      {"dpsgd contraction, determinism, monotone descent",
       check_dpsgd_mechanics},
      {"dpsgd ball containment", check_containment_lemma},
      {"noise schedule budget invariants", check_schedule_invariants},
      {"epsilon accountant monotonicity", check_account_epsilon},
      {"csv float round-trip", check_csv_round_trip},
      {"grid evaluator parallel == serial", check_grid_parallel_matches_serial},
      {"mc evaluator parallel == serial", check_mc_parallel_matches_serial},
  };

  SelftestResult result;
  for (const Check& check : checks) {
    bool ok = false;
    try {
      ok = check.fn();
    } catch (const std::exception& e) {
      log << "[FAIL] " << check.name << " (exception: " << e.what() << ")\n";
      ++result.failed;
      continue;
    }
    if (ok) {
      log << "[PASS] " << check.name << "\n";
      ++result.passed;
    } else {
      log << "[FAIL] " << check.name << "\n";
      ++result.failed;
    }
  }
  log << "selftest: " << result.passed << " passed, " << result.failed
      << " failed\n";
  return result;
}

}  // namespace basinsep
