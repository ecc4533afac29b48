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

// Independent oracles for the test suites and the selftest command. These
// deliberately avoid the library's analytic code paths: gradients come from
// central finite differences, projections from brute-force search.

#ifndef BASINSEP_TESTING_HPP_
#define BASINSEP_TESTING_HPP_

#include "basinsep/loss.hpp"
#include "basinsep/rng.hpp"
#include "basinsep/vec.hpp"

namespace basinsep {
namespace testing {

// Central finite-difference gradient of an arbitrary per-example loss.
ParamPoint fd_gradient(const LossFamily& loss, const ParamPoint& theta,
                       const DataPoint& d, double h1, double h2);

// || analytic - fd || / max(1, || analytic ||).
double gradient_rel_error(const LossFamily& loss, const ParamPoint& theta,
                          const DataPoint& d, double h1, double h2);

// A random point staying away from every kink of the composite loss
// (clamp boundaries and gate kinks) by at least `margin` in the relevant
// distance, so central differences see a smooth function.
struct SmoothPoint {
  ParamPoint theta;
  DataPoint d;
};
SmoothPoint random_smooth_point(const BasinLossSpec& spec, RngStream& stream,
                                double margin);

// Random point/data pair for the quadratic loss (smooth everywhere).
SmoothPoint random_quadratic_point(const QuadraticLossSpec& spec,
                                   RngStream& stream);

// Best distance from v to the annulus found by brute force over a dense
// grid of the annulus (radial x angular in 2D, endpoints in 1D).
double annulus_distance_brute(const RealVector& v, double M, double R1,
                              long grid);

}  // namespace testing
}  // namespace basinsep

#endif  // BASINSEP_TESTING_HPP_
