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

#include "basinsep/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "basinsep/stats.hpp"

namespace basinsep {
namespace {

void require_dim(const RealVector& v, std::size_t dim, const char* what) {
  if (v.dim() != dim) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

void require_dims(const BasinLossSpec& spec, const ParamPoint& theta,
                  const DataPoint& d) {
  require_dim(theta.theta1, spec.dim1, "theta1");
  require_dim(theta.theta2, spec.dim2, "theta2");
  require_dim(d.d1, spec.dim1, "d1");
  require_dim(d.d2, spec.dim2, "d2");
}

// Gate value plus what the gradient needs: the radial derivative factor of
// q with respect to theta1, zero outside the open ramp region.
struct GateInfo {
  double q = 0.0;
  // grad q = radial_coeff * theta1 (already includes 1/||theta1||).
  double radial_coeff = 0.0;
};

GateInfo gate_info(const BasinLossSpec& spec, const RealVector& theta1) {
  GateInfo info;
  const double n = norm(theta1);
  const double dist = annulus_distance(n, spec.M, spec.R1);
  if (spec.hard_gate) {
    info.q = dist == 0.0 ? 1.0 : 0.0;
    return info;
  }
  if (dist == 0.0) {
    info.q = 1.0;
    return info;
  }
  if (dist >= spec.R2) {
    info.q = 0.0;
    return info;
  }
  info.q = 1.0 - dist / spec.R2;
  if (n > 0.0) {
    // Outside the annulus dist = ||theta1|| - (M + R1), inside the hole
    // dist = (M - R1) - ||theta1||; q falls at rate 1/R2 along the radius.
    const double sign = n > spec.M ? 1.0 : -1.0;
    info.radial_coeff = -sign / (spec.R2 * n);
  }
  return info;
}

}  // namespace

double ell1(const BasinLossSpec& spec, const RealVector& theta1,
            const RealVector& d1) {
  require_dim(theta1, spec.dim1, "theta1");
  require_dim(d1, spec.dim1, "d1");
  return std::min(0.5 * squared_distance(theta1, d1), BasinLossSpec::kClamp);
}

double ell2(const BasinLossSpec& spec, const RealVector& theta2,
            const RealVector& d2) {
  require_dim(theta2, spec.dim2, "theta2");
  require_dim(d2, spec.dim2, "d2");
  const double scaled =
      squared_distance(theta2, d2) / (2.0 * spec.r * spec.r);
  return std::min(0.0, scaled - BasinLossSpec::kClamp);
}

double q_gate(const BasinLossSpec& spec, const RealVector& theta1) {
  require_dim(theta1, spec.dim1, "theta1");
  return gate_info(spec, theta1).q;
}

double composite_loss(const BasinLossSpec& spec, const ParamPoint& theta,
                      const DataPoint& d) {
  require_dims(spec, theta, d);
  const double l1 =
      std::min(0.5 * squared_distance(theta.theta1, d.d1), BasinLossSpec::kClamp);
  const double q = gate_info(spec, theta.theta1).q;
  if (q == 0.0) return l1;
  const double l2 = std::min(
      0.0, squared_distance(theta.theta2, d.d2) / (2.0 * spec.r * spec.r) -
               BasinLossSpec::kClamp);
  return l1 + static_cast<double>(spec.p) * q * l2;
}

void composite_grad(const BasinLossSpec& spec, const ParamPoint& theta,
                    const DataPoint& d, ParamPoint& out) {
  require_dims(spec, theta, d);
  if (out.theta1.dim() != spec.dim1) out.theta1 = RealVector(spec.dim1);
  if (out.theta2.dim() != spec.dim2) out.theta2 = RealVector(spec.dim2);

  const double dist1_sq = squared_distance(theta.theta1, d.d1);
  const bool clamp1_active = dist1_sq >= 2.0 * BasinLossSpec::kClamp;
  for (std::size_t i = 0; i < spec.dim1; ++i) {
    out.theta1[i] = clamp1_active ? 0.0 : theta.theta1[i] - d.d1[i];
  }

  const GateInfo gate = gate_info(spec, theta.theta1);
  const double r_sq = spec.r * spec.r;
  const double dist2_sq = squared_distance(theta.theta2, d.d2);
  const double l2 =
      std::min(0.0, dist2_sq / (2.0 * r_sq) - BasinLossSpec::kClamp);
  const double p = static_cast<double>(spec.p);

  if (gate.radial_coeff != 0.0 && l2 != 0.0) {
    const double coeff = p * l2 * gate.radial_coeff;
    for (std::size_t i = 0; i < spec.dim1; ++i) {
      out.theta1[i] += coeff * theta.theta1[i];
    }
  }

  const bool clamp2_active = dist2_sq >= 2.0 * BasinLossSpec::kClamp * r_sq;
  if (gate.q > 0.0 && !clamp2_active) {
    const double coeff = p * gate.q / r_sq;
    for (std::size_t i = 0; i < spec.dim2; ++i) {
      out.theta2[i] = coeff * (theta.theta2[i] - d.d2[i]);
    }
  } else {
    for (std::size_t i = 0; i < spec.dim2; ++i) out.theta2[i] = 0.0;
  }
}

ParamPoint composite_grad(const BasinLossSpec& spec, const ParamPoint& theta,
                          const DataPoint& d) {
  ParamPoint out;
  composite_grad(spec, theta, d, out);
  return out;
}

double quadratic_loss(const QuadraticLossSpec& spec, const ParamPoint& theta,
                      const DataPoint& d) {
  require_dim(theta.theta1, spec.dim1, "theta1");
  require_dim(theta.theta2, spec.dim2, "theta2");
  require_dim(d.d1, spec.dim1, "d1");
  require_dim(d.d2, spec.dim2, "d2");
  return 0.5 * squared_distance(theta.theta1, d.d1) +
         static_cast<double>(spec.p) / (2.0 * spec.r * spec.r) *
             squared_distance(theta.theta2, d.d2);
}

void quadratic_grad(const QuadraticLossSpec& spec, const ParamPoint& theta,
                    const DataPoint& d, ParamPoint& out) {
  require_dim(theta.theta1, spec.dim1, "theta1");
  require_dim(theta.theta2, spec.dim2, "theta2");
  require_dim(d.d1, spec.dim1, "d1");
  require_dim(d.d2, spec.dim2, "d2");
  if (out.theta1.dim() != spec.dim1) out.theta1 = RealVector(spec.dim1);
  if (out.theta2.dim() != spec.dim2) out.theta2 = RealVector(spec.dim2);
  for (std::size_t i = 0; i < spec.dim1; ++i) {
    out.theta1[i] = theta.theta1[i] - d.d1[i];
  }
  const double coeff = static_cast<double>(spec.p) / (spec.r * spec.r);
  for (std::size_t i = 0; i < spec.dim2; ++i) {
    out.theta2[i] = coeff * (theta.theta2[i] - d.d2[i]);
  }
}

ParamPoint quadratic_grad(const QuadraticLossSpec& spec,
                          const ParamPoint& theta, const DataPoint& d) {
  ParamPoint out;
  quadratic_grad(spec, theta, d, out);
  return out;
}

double BasinLoss::value(const ParamPoint& theta, const DataPoint& d) const {
  return composite_loss(spec_, theta, d);
}

void BasinLoss::gradient(const ParamPoint& theta, const DataPoint& d,
                         ParamPoint& out) const {
  composite_grad(spec_, theta, d, out);
}

double QuadraticLoss::value(const ParamPoint& theta, const DataPoint& d) const {
  return quadratic_loss(spec_, theta, d);
}

void QuadraticLoss::gradient(const ParamPoint& theta, const DataPoint& d,
                             ParamPoint& out) const {
  quadratic_grad(spec_, theta, d, out);
}

ClosedFormResult population_loss_closed_form(const BasinLossSpec& spec,
                                             const TaskInstance& task,
                                             const ParamPoint& theta) {
  require_dim(theta.theta1, spec.dim1, "theta1");
  require_dim(theta.theta2, spec.dim2, "theta2");
  ClosedFormResult result;
  if (norm(theta.theta1) > 2.0 || norm(theta.theta2) > 2.0 * spec.r) {
    return result;
  }
  const double v1 = distribution_mean_square_spread(task.priv_dist.first);
  const double v2 = distribution_mean_square_spread(task.priv_dist.second);
  const double q = q_gate(spec, theta.theta1);
  const double block1 =
      0.5 * (squared_distance(theta.theta1, task.mu1) + v1);
  const double block2 =
      (squared_distance(theta.theta2, task.mu2) + v2) /
          (2.0 * spec.r * spec.r) -
      BasinLossSpec::kClamp;
  result.value = block1 + static_cast<double>(spec.p) * q * block2;
  result.valid = true;
  return result;
}

double quadratic_population_loss(const QuadraticLossSpec& spec,
                                 const TaskInstance& task,
                                 const ParamPoint& theta) {
  const double v1 = distribution_mean_square_spread(task.priv_dist.first);
  const double v2 = distribution_mean_square_spread(task.priv_dist.second);
  return 0.5 * (squared_distance(theta.theta1, task.mu1) + v1) +
         static_cast<double>(spec.p) / (2.0 * spec.r * spec.r) *
             (squared_distance(theta.theta2, task.mu2) + v2);
}

namespace {

constexpr long kMcChunkSize = 8192;

McResult mc_from_moments(const RunningMoments& m) {
  McResult out;
  out.estimate = m.mean;
  out.stderr_mean = m.stderr_mean();
  return out;
}

RunningMoments mc_chunk(const LossFamily& loss, const ProductDistribution& dist,
                        const ParamPoint& theta, long count, RngStream stream) {
  RunningMoments moments;
  DataPoint d;
  for (long i = 0; i < count; ++i) {
    d.d1 = sample_one(dist.first, stream);
    d.d2 = sample_one(dist.second, stream);
    moments.add(loss.value(theta, d));
  }
  return moments;
}

}  // namespace

McResult population_loss_mc(const LossFamily& loss,
                            const ProductDistribution& dist,
                            const ParamPoint& theta, long n_mc,
                            const RngStream& base) {
  if (n_mc < 2) {
    throw std::invalid_argument("population_loss_mc: n_mc must be >= 2");
  }
  const long n_chunks = (n_mc + kMcChunkSize - 1) / kMcChunkSize;
  std::vector<RunningMoments> parts(static_cast<std::size_t>(n_chunks));
#pragma omp parallel for schedule(dynamic)
  for (long c = 0; c < n_chunks; ++c) {
    const long count = std::min(kMcChunkSize, n_mc - c * kMcChunkSize);
    parts[static_cast<std::size_t>(c)] =
        mc_chunk(loss, dist, theta, count,
                 base.child(static_cast<std::uint64_t>(c)));
  }
  RunningMoments total;
  for (const RunningMoments& part : parts) total.merge(part);
  return mc_from_moments(total);
}

McResult population_loss_mc_serial(const LossFamily& loss,
                                   const ProductDistribution& dist,
                                   const ParamPoint& theta, long n_mc,
                                   const RngStream& base) {
  if (n_mc < 2) {
    throw std::invalid_argument("population_loss_mc: n_mc must be >= 2");
  }
  const long n_chunks = (n_mc + kMcChunkSize - 1) / kMcChunkSize;
  RunningMoments total;
  for (long c = 0; c < n_chunks; ++c) {
    const long count = std::min(kMcChunkSize, n_mc - c * kMcChunkSize);
    total.merge(mc_chunk(loss, dist, theta, count,
                         base.child(static_cast<std::uint64_t>(c))));
  }
  return mc_from_moments(total);
}

RiskResult excess_risk(const BasinLossSpec& spec, const TaskInstance& task,
                       const ParamPoint& theta, EvaluatorPreference pref,
                       long n_mc, const RngStream& mc_stream) {
  const ClosedFormResult at_star =
      population_loss_closed_form(spec, task, task.minimizer());
  if (!at_star.valid) {
    throw std::logic_error(
        "excess_risk: population minimizer outside the closed-form regime");
  }
  RiskResult result;
  const ClosedFormResult cf = population_loss_closed_form(spec, task, theta);
  if (pref == EvaluatorPreference::closed_form_when_valid && cf.valid) {
    result.excess = cf.value - at_star.value;
    result.evaluator = EvaluatorKind::closed_form;
    return result;
  }
  const BasinLoss loss(spec);
  const McResult mc =
      population_loss_mc(loss, task.priv_dist, theta, n_mc, mc_stream);
  result.excess = mc.estimate - at_star.value;
  result.evaluator = EvaluatorKind::monte_carlo;
  return result;
}

double quadratic_excess_risk(const QuadraticLossSpec& spec,
                             const TaskInstance& task,
                             const ParamPoint& theta) {
  return quadratic_population_loss(spec, task, theta) -
         quadratic_population_loss(spec, task, task.minimizer());
}

}  // namespace basinsep
