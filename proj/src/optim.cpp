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

#include "basinsep/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace basinsep {
namespace {

void apply_block_projection(const BlockProjection& proj, RealVector& block) {
  switch (proj.kind) {
    case BlockProjection::Kind::none:
      return;
    case BlockProjection::Kind::ball:
      block = project_ball(block, proj.radius);
      return;
    case BlockProjection::Kind::annulus:
      block = project_annulus(block, proj.M, proj.R1);
      return;
  }
}

long check_projection(const ProjectionPair& proj, const ParamPoint& theta) {
  const double tol = 1e-9;
  long bad = 0;
  if (proj.block1.kind == BlockProjection::Kind::ball &&
      norm(theta.theta1) > proj.block1.radius * (1.0 + tol)) {
    ++bad;
  }
  if (proj.block2.kind == BlockProjection::Kind::ball &&
      norm(theta.theta2) > proj.block2.radius * (1.0 + tol)) {
    ++bad;
  }
  if (proj.block1.kind == BlockProjection::Kind::annulus &&
      annulus_distance(norm(theta.theta1), proj.block1.M, proj.block1.R1) >
          tol) {
    ++bad;
  }
  return bad;
}

void require_dataset(const LossFamily& loss, const Dataset& data) {
  if (data.points.empty()) {
    throw std::invalid_argument("optimizer: dataset must be nonempty");
  }
  for (const DataPoint& d : data.points) {
    if (d.d1.dim() != loss.dim1() || d.d2.dim() != loss.dim2()) {
      throw std::invalid_argument("optimizer: data dimension mismatch");
    }
  }
}

}  // namespace

long NoiseSchedule::total_length() const {
  long total = 0;
  for (const Phase& phase : phases) {
    if (phase.length <= 0 || phase.multiplier <= 0.0) {
      throw std::invalid_argument(
          "NoiseSchedule: phase lengths and multipliers must be positive");
    }
    total += phase.length;
  }
  return total;
}

std::vector<double> NoiseSchedule::per_step() const {
  std::vector<double> steps;
  steps.reserve(static_cast<std::size_t>(total_length()));
  for (const Phase& phase : phases) {
    steps.insert(steps.end(), static_cast<std::size_t>(phase.length),
                 phase.multiplier);
  }
  return steps;
}

double NoiseSchedule::energy() const {
  double e = 0.0;
  for (const Phase& phase : phases) {
    e += static_cast<double>(phase.length) * phase.multiplier *
         phase.multiplier;
  }
  return e;
}

bool equal_noise_budget(const NoiseSchedule& a, const NoiseSchedule& b) {
  std::vector<double> sa = a.per_step();
  std::vector<double> sb = b.per_step();
  if (sa.size() != sb.size()) return false;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return sa == sb;
}

double calibrate_sigma(double epsilon, double delta, double L, long n,
                       double c_sigma) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("calibrate_sigma: delta must be in (0, 1)");
  }
  if (epsilon <= 0.0 || n <= 0 || c_sigma <= 0.0 || L < 0.0) {
    throw std::invalid_argument("calibrate_sigma: bad parameters");
  }
  return c_sigma * L * std::sqrt(std::log(1.0 / delta)) /
         (epsilon * static_cast<double>(n));
}

double DpSgdConfig::resolved_sigma() const {
  if (sigma >= 0.0) return sigma;
  return calibrate_sigma(epsilon, delta, L, n, c_sigma);
}

void DpSgdConfig::validate() const {
  if (n < 1) throw std::invalid_argument("DpSgdConfig: n must be >= 1");
  if (m <= 0.0) throw std::invalid_argument("DpSgdConfig: m must be > 0");
  if (L < 0.0) throw std::invalid_argument("DpSgdConfig: L must be >= 0");
  if (resolved_T() < 1) throw std::invalid_argument("DpSgdConfig: T must be >= 1");
  if (sigma < 0.0) {
    (void)resolved_sigma();  // throws on bad epsilon/delta
  }
  if (schedule.has_value() && schedule->total_length() != resolved_T()) {
    throw std::invalid_argument(
        "DpSgdConfig: schedule phase lengths must sum to T");
  }
}

Trajectory run_gd(const LossFamily& loss, const Dataset& data,
                  const GdConfig& config, const ParamPoint& theta0) {
  require_dataset(loss, data);
  if (config.step_size <= 0.0) {
    throw std::invalid_argument("run_gd: step_size must be > 0");
  }
  Trajectory traj;
  ParamPoint theta = theta0;
  ParamPoint grad_sum = ParamPoint::zeros(loss.dim1(), loss.dim2());
  ParamPoint grad = ParamPoint::zeros(loss.dim1(), loss.dim2());
  const double inv_n = 1.0 / static_cast<double>(data.points.size());

  for (long step = 0; step < config.steps; ++step) {
    for (std::size_t i = 0; i < loss.dim1(); ++i) grad_sum.theta1[i] = 0.0;
    for (std::size_t i = 0; i < loss.dim2(); ++i) grad_sum.theta2[i] = 0.0;
    for (const DataPoint& d : data.points) {
      loss.gradient(theta, d, grad);
      axpy(1.0, grad.theta1, grad_sum.theta1);
      axpy(1.0, grad.theta2, grad_sum.theta2);
    }
    axpy(-config.step_size * inv_n, grad_sum.theta1, theta.theta1);
    axpy(-config.step_size * inv_n, grad_sum.theta2, theta.theta2);
    if (config.projection.has_value()) {
      apply_block_projection(config.projection->block1, theta.theta1);
      apply_block_projection(config.projection->block2, theta.theta2);
      traj.projection_violations += check_projection(*config.projection, theta);
    }
    traj.max_block1_displacement = std::max(
        traj.max_block1_displacement, distance(theta.theta1, theta0.theta1));
  }
  traj.steps_taken = config.steps;
  theta.theta1.check_finite("run_gd");
  theta.theta2.check_finite("run_gd");
  traj.final_point = std::move(theta);
  return traj;
}

Trajectory run_dpsgd(const LossFamily& loss, const Dataset& data,
                     const DpSgdConfig& config, const ParamPoint& theta0,
                     RngStream stream, const TrajectoryOptions& options) {
  require_dataset(loss, data);
  config.validate();
  if (static_cast<long>(data.points.size()) != config.n) {
    throw std::invalid_argument(
        "run_dpsgd: dataset size must equal the configured n");
  }
  const long T = config.resolved_T();
  const double sigma = config.resolved_sigma();
  std::vector<double> multipliers;
  if (config.schedule.has_value()) multipliers = config.schedule->per_step();

  Trajectory traj;
  ParamPoint theta = theta0;
  ParamPoint grad = ParamPoint::zeros(loss.dim1(), loss.dim2());
  ParamPoint suffix_sum;
  long suffix_count = 0;
  const long suffix_start = T - T / 2 + 1;  // steps T/2 rounds, 1-indexed
  if (config.suffix_averaging) {
    suffix_sum = ParamPoint::zeros(loss.dim1(), loss.dim2());
  }

  for (long t = 1; t <= T; ++t) {
    const std::size_t idx = static_cast<std::size_t>(
        stream.uniform_index(static_cast<std::uint64_t>(config.n)));
    loss.gradient(theta, data.points[idx], grad);

    const double gnorm = std::sqrt(param_squared_norm(grad));
    if (gnorm > config.L) {
      const double shrink = config.L / gnorm;
      for (std::size_t i = 0; i < loss.dim1(); ++i) grad.theta1[i] *= shrink;
      for (std::size_t i = 0; i < loss.dim2(); ++i) grad.theta2[i] *= shrink;
      if (param_squared_norm(grad) > config.L * config.L * (1.0 + 1e-9)) {
        throw std::logic_error("run_dpsgd: clipping failed to bound gradient");
      }
    }

    const double eta = 1.0 / (config.m * static_cast<double>(t));
    const double mult = multipliers.empty()
                            ? 1.0
                            : multipliers[static_cast<std::size_t>(t - 1)];
    const double noise_std = eta * sigma * mult;
    if (noise_std > 0.0) {
      for (std::size_t i = 0; i < loss.dim1(); ++i) {
        theta.theta1[i] += -eta * grad.theta1[i] + stream.gaussian(noise_std);
      }
      for (std::size_t i = 0; i < loss.dim2(); ++i) {
        theta.theta2[i] += -eta * grad.theta2[i] + stream.gaussian(noise_std);
      }
    } else {
      axpy(-eta, grad.theta1, theta.theta1);
      axpy(-eta, grad.theta2, theta.theta2);
    }

    if (config.projection.has_value()) {
      apply_block_projection(config.projection->block1, theta.theta1);
      apply_block_projection(config.projection->block2, theta.theta2);
      traj.projection_violations += check_projection(*config.projection, theta);
    }

    traj.max_block1_displacement = std::max(
        traj.max_block1_displacement, distance(theta.theta1, theta0.theta1));
    if (options.containment.has_value() &&
        distance(theta.theta2, options.containment->reference) >
            options.containment->bound) {
      ++traj.containment_violations;
    }
    if (options.thin_every > 0 && t % options.thin_every == 0) {
      traj.thinned.push_back(theta);
    }
    if (config.suffix_averaging && t >= suffix_start) {
      axpy(1.0, theta.theta1, suffix_sum.theta1);
      axpy(1.0, theta.theta2, suffix_sum.theta2);
      ++suffix_count;
    }
  }

  traj.steps_taken = T;
  if (config.suffix_averaging && suffix_count > 0) {
    const double inv = 1.0 / static_cast<double>(suffix_count);
    traj.final_point = ParamPoint(scale(suffix_sum.theta1, inv),
                                  scale(suffix_sum.theta2, inv));
  } else {
    traj.final_point = std::move(theta);
  }
  traj.final_point.theta1.check_finite("run_dpsgd");
  traj.final_point.theta2.check_finite("run_dpsgd");
  return traj;
}

double account_epsilon(double sigma_over_L, long T, long n, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("account_epsilon: delta must be in (0, 1)");
  }
  if (sigma_over_L <= 0.0 || n <= 0 || T < 0) {
    throw std::invalid_argument("account_epsilon: bad parameters");
  }
  if (T == 0) return 0.0;
  const double eps_step =
      std::sqrt(2.0 * std::log(1.25 / delta)) / sigma_over_L;
  // Subsampling amplification at rate 1/n, then basic composition.
  double eps_sub;
  if (eps_step > 40.0) {
    // exp(eps_step) dwarfs 1; avoid overflow.
    eps_sub = eps_step - std::log(static_cast<double>(n));
    eps_sub = std::max(eps_sub, 0.0);
  } else {
    eps_sub = std::log1p(std::expm1(eps_step) / static_cast<double>(n));
  }
  return static_cast<double>(T) * eps_sub;
}

}  // namespace basinsep
