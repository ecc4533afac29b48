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

#include "basinsep/testing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace basinsep {
namespace testing {
namespace {

double eval_shifted(const LossFamily& loss, const ParamPoint& theta,
                    const DataPoint& d, int block, std::size_t i,
                    double shift) {
  ParamPoint shifted = theta;
  if (block == 1) {
    shifted.theta1[i] += shift;
  } else {
    shifted.theta2[i] += shift;
  }
  return loss.value(shifted, d);
}

}  // namespace

ParamPoint fd_gradient(const LossFamily& loss, const ParamPoint& theta,
                       const DataPoint& d, double h1, double h2) {
  ParamPoint grad = ParamPoint::zeros(theta.theta1.dim(), theta.theta2.dim());
  for (std::size_t i = 0; i < theta.theta1.dim(); ++i) {
    grad.theta1[i] = (eval_shifted(loss, theta, d, 1, i, h1) -
                      eval_shifted(loss, theta, d, 1, i, -h1)) /
                     (2.0 * h1);
  }
  for (std::size_t i = 0; i < theta.theta2.dim(); ++i) {
    grad.theta2[i] = (eval_shifted(loss, theta, d, 2, i, h2) -
                      eval_shifted(loss, theta, d, 2, i, -h2)) /
                     (2.0 * h2);
  }
  return grad;
}

double gradient_rel_error(const LossFamily& loss, const ParamPoint& theta,
                          const DataPoint& d, double h1, double h2) {
  ParamPoint analytic = ParamPoint::zeros(theta.theta1.dim(), theta.theta2.dim());
  loss.gradient(theta, d, analytic);
  const ParamPoint fd = fd_gradient(loss, theta, d, h1, h2);
  const double err = param_distance(analytic, fd);
  const double scale =
      std::max(1.0, std::sqrt(param_squared_norm(analytic)));
  return err / scale;
}

SmoothPoint random_smooth_point(const BasinLossSpec& spec, RngStream& stream,
                                double margin) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    SmoothPoint out;
    out.theta.theta1 = RealVector(spec.dim1);
    out.theta.theta2 = RealVector(spec.dim2);
    out.d.d1 = RealVector(spec.dim1);
    out.d.d2 = RealVector(spec.dim2);
    for (std::size_t i = 0; i < spec.dim1; ++i) {
      out.theta.theta1[i] = stream.gaussian(1.0);
      out.d.d1[i] = stream.gaussian(0.5);
    }
    out.d.d1 = project_ball(out.d.d1, 1.0);
    for (std::size_t i = 0; i < spec.dim2; ++i) {
      out.theta.theta2[i] = stream.gaussian(spec.r);
      out.d.d2[i] = stream.gaussian(0.5 * spec.r);
    }
    out.d.d2 = project_ball(out.d.d2, spec.r);

    const double dist1 = distance(out.theta.theta1, out.d.d1);
    if (std::abs(dist1 - 3.0) < margin) continue;  // ell1 clamp kink
    const double dist2 = distance(out.theta.theta2, out.d.d2);
    if (std::abs(dist2 - 3.0 * spec.r) < margin * spec.r) continue;  // ell2 kink
    const double gate_dist =
        annulus_distance(norm(out.theta.theta1), spec.M, spec.R1);
    if (gate_dist < margin || std::abs(gate_dist - spec.R2) < margin) {
      continue;  // gate kinks at the annulus boundary and ramp edge
    }
    if (norm(out.theta.theta1) < margin) continue;  // radial kink at 0
    return out;
  }
  throw std::runtime_error("random_smooth_point: rejection sampling failed");
}

SmoothPoint random_quadratic_point(const QuadraticLossSpec& spec,
                                   RngStream& stream) {
  SmoothPoint out;
  out.theta.theta1 = RealVector(spec.dim1);
  out.theta.theta2 = RealVector(spec.dim2);
  out.d.d1 = RealVector(spec.dim1);
  out.d.d2 = RealVector(spec.dim2);
  for (std::size_t i = 0; i < spec.dim1; ++i) {
    out.theta.theta1[i] = stream.gaussian(1.0);
    out.d.d1[i] = stream.gaussian(0.5);
  }
  out.d.d1 = project_ball(out.d.d1, spec.radius1);
  for (std::size_t i = 0; i < spec.dim2; ++i) {
    out.theta.theta2[i] = stream.gaussian(spec.r);
    out.d.d2[i] = stream.gaussian(0.5 * spec.r);
  }
  out.d.d2 = project_ball(out.d.d2, spec.radius2);
  return out;
}

double annulus_distance_brute(const RealVector& v, double M, double R1,
                              long grid) {
  double best = std::numeric_limits<double>::infinity();
  if (v.dim() == 1) {
    for (long i = 0; i <= grid; ++i) {
      const double radius =
          (M - R1) + 2.0 * R1 * static_cast<double>(i) / static_cast<double>(grid);
      for (double sign : {-1.0, 1.0}) {
        const double d = std::abs(v[0] - sign * radius);
        best = std::min(best, d);
      }
    }
    return best;
  }
  if (v.dim() == 2) {
    for (long i = 0; i <= grid; ++i) {
      const double radius =
          (M - R1) + 2.0 * R1 * static_cast<double>(i) / static_cast<double>(grid);
      for (long a = 0; a < 4 * grid; ++a) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(a) /
                             static_cast<double>(4 * grid);
        const double dx = v[0] - radius * std::cos(angle);
        const double dy = v[1] - radius * std::sin(angle);
        best = std::min(best, std::sqrt(dx * dx + dy * dy));
      }
    }
    return best;
  }
  throw std::invalid_argument("annulus_distance_brute: dims 1 and 2 only");
}

}  // namespace testing
}  // namespace basinsep
