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

#ifndef BASINSEP_OPTIM_HPP_
#define BASINSEP_OPTIM_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "basinsep/distributions.hpp"
#include "basinsep/loss.hpp"
#include "basinsep/rng.hpp"
#include "basinsep/vec.hpp"

namespace basinsep {

struct BlockProjection {
  enum class Kind { none, ball, annulus };
  Kind kind = Kind::none;
  double radius = 0.0;  // ball radius
  double M = 0.0;       // annulus parameters
  double R1 = 0.0;

  static BlockProjection none() { return {}; }
  static BlockProjection ball(double radius) {
    BlockProjection p;
    p.kind = Kind::ball;
    p.radius = radius;
    return p;
  }
  static BlockProjection annulus(double M, double R1) {
    BlockProjection p;
    p.kind = Kind::annulus;
    p.M = M;
    p.R1 = R1;
    return p;
  }
};

struct ProjectionPair {
  BlockProjection block1;
  BlockProjection block2;

  bool any() const {
    return block1.kind != BlockProjection::Kind::none ||
           block2.kind != BlockProjection::Kind::none;
  }
};

struct GdConfig {
  long steps = 1;
  double step_size = 1.0;
  std::optional<ProjectionPair> projection;
};

// Noise schedule for DP-SGD: phases of (length, sigma multiplier). Phase
// lengths must sum to the configured number of iterations.
struct NoiseSchedule {
  struct Phase {
    long length = 0;
    double multiplier = 1.0;
  };
  std::vector<Phase> phases;

  long total_length() const;
  // Per-step multipliers, expanded.
  std::vector<double> per_step() const;
  // Sum over steps of multiplier^2 (the schedule's noise-energy budget).
  double energy() const;
};

// True when the two schedules inject the same multiset of per-step
// multipliers (equal total noise budget in any order).
bool equal_noise_budget(const NoiseSchedule& a, const NoiseSchedule& b);

// sigma = c_sigma * L * sqrt(ln(1/delta)) / (epsilon * n).
// The constant is not a certified privacy calibration; c_sigma exposes it.
double calibrate_sigma(double epsilon, double delta, double L, long n,
                       double c_sigma);

// DP-SGD instantiation: T iterations, one uniformly sampled example per
// step, per-example gradient clipped to norm L, step size eta_t = 1/(m t),
// per-coordinate Gaussian noise of std eta_t * sigma * multiplier(t).
struct DpSgdConfig {
  double epsilon = 1.0;
  double delta = 1e-4;
  long n = 1;           // private sample count
  double m = 1.0;       // strong-convexity scale driving the step decay
  double L = 1.0;       // clip norm
  long T = 0;           // iterations; 0 resolves to n^2
  double sigma = -1.0;  // per-step noise scale; < 0 resolves via calibration
  double c_sigma = 1.0;
  std::optional<ProjectionPair> projection;
  std::optional<NoiseSchedule> schedule;
  bool suffix_averaging = false;  // output the average of the last T/2 iterates

  long resolved_T() const { return T > 0 ? T : n * n; }
  double resolved_sigma() const;
  void validate() const;
};

// Optional trajectory instrumentation.
struct Block2Containment {
  RealVector reference;  // typically the population minimizer of block two
  double bound = 0.0;    // max allowed ||theta2_t - reference||
};

struct TrajectoryOptions {
  long thin_every = 0;  // record every k-th iterate (0 = none)
  std::optional<Block2Containment> containment;
};

struct Trajectory {
  ParamPoint final_point;
  long steps_taken = 0;
  // max_t || theta1_t - theta1_0 ||
  double max_block1_displacement = 0.0;
  // Containment-flag summary, meaningful only when the check was requested:
  // count of iterates with ||theta2_t - ref|| > bound.
  long containment_violations = 0;
  long projection_violations = 0;  // always 0; hard-checked each step
  std::vector<ParamPoint> thinned;
};

// Full-batch gradient descent on the empirical mean loss, optional per-block
// projection after each step.
Trajectory run_gd(const LossFamily& loss, const Dataset& data,
                  const GdConfig& config, const ParamPoint& theta0);

Trajectory run_dpsgd(const LossFamily& loss, const Dataset& data,
                     const DpSgdConfig& config, const ParamPoint& theta0,
                     RngStream stream,
                     const TrajectoryOptions& options = {});

// Heuristic epsilon report: per-step Gaussian mechanism at noise multiplier
// sigma/L amplified by subsampling at rate 1/n, basic composition over T
// steps. A sanity indicator only, not a certified bound.
double account_epsilon(double sigma_over_L, long T, long n, double delta);

}  // namespace basinsep

#endif  // BASINSEP_OPTIM_HPP_
