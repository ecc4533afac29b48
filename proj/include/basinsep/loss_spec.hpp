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

#ifndef BASINSEP_LOSS_SPEC_HPP_
#define BASINSEP_LOSS_SPEC_HPP_

#include <cstddef>

namespace basinsep {

// Constants of the two-block basin construction.
//
//   p      base scale parameter (multiplier of the second loss block)
//   dim1   dimension of theta1 / d1 (p^4 under theorem scaling)
//   dim2   dimension of theta2 / d2 (p under theorem scaling)
//   M      radius at which the annulus S is centered
//   R1     half-width of S
//   R2     width of the gate ramp outside S
//   r      support radius of the second data block
//
// Valid specs satisfy 0 < R1 < M, 0 < R2 < M - R1 (so the gate vanishes at
// the origin) and M + R1 <= 1 (S inside the unit ball). The clamp constant
// 9/2 is fixed: the bounded-loss arithmetic depends on it.
struct BasinLossSpec {
  int p = 1;
  std::size_t dim1 = 1;
  std::size_t dim2 = 1;
  double M = 0.5;
  double R1 = 0.25;
  double R2 = 0.2;
  double r = 1e-3;
  bool hard_gate = false;  // optional 0/1 gate instead of the linear ramp

  static constexpr double kClamp = 4.5;

  void validate() const;  // throws std::invalid_argument on violation

  // Desk-mode defaults: constants decoupled from the asymptotic relations so
  // the separation is measurable at small p.
  static BasinLossSpec desk_default();

  // Desk constants with dimensions scaled as dim1 = p^4, dim2 = p; used for
  // the rate-trend sweep.
  static BasinLossSpec desk_scaled(int p);

  // Theorem scaling: dim1 = p^4, dim2 = p, M = min(1/2, sqrt(dim1)/(eps *
  // p^2)), R1 = min(1/p^2 + log(p)/sqrt(p), M/2), R2 = (M - R1)/2,
  // r = 1/(20 p^{5/2} sqrt(log(1/delta))).
  static BasinLossSpec theorem_scaled(int p, double epsilon, double delta);

  // The two-dimensional toy landscape (p = 1, r = 0.01, M = 0.5, R1 = 0.1,
  // R2 = 0.2).
  static BasinLossSpec toy();
};

// Constants of the constrained quadratic variant: blocks are plain
// quadratics with curvatures 1 and p/r^2, optimized over the product of
// balls B(0, radius1) x B(0, radius2).
struct QuadraticLossSpec {
  int p = 1;
  std::size_t dim1 = 1;
  std::size_t dim2 = 1;
  double r = 1e-3;
  double radius1 = 1.0;
  double radius2 = 1e-3;

  void validate() const;

  static QuadraticLossSpec from_basin(const BasinLossSpec& spec);
};

}  // namespace basinsep

#endif  // BASINSEP_LOSS_SPEC_HPP_
