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

#ifndef BASINSEP_LOSS_HPP_
#define BASINSEP_LOSS_HPP_

#include <cstdint>

#include "basinsep/distributions.hpp"
#include "basinsep/loss_spec.hpp"
#include "basinsep/vec.hpp"

namespace basinsep {

// First block: clamped quadratic, min{ ||theta1 - d1||^2 / 2, 9/2 }.
// Always in [0, 9/2].
double ell1(const BasinLossSpec& spec, const RealVector& theta1,
            const RealVector& d1);

// Second block: min{ 0, ||theta2 - d2||^2 / (2 r^2) - 9/2 }. Always <= 0;
// the quadratic branch is active whenever ||theta2 - d2|| <= 3r.
double ell2(const BasinLossSpec& spec, const RealVector& theta2,
            const RealVector& d2);

// Gate in [0, 1]: 1 inside the annulus S = {M - R1 <= ||theta1|| <= M + R1},
// 0 at distance >= R2 from S, linear ramp in between. With hard_gate set the
// ramp is replaced by the indicator of S.
double q_gate(const BasinLossSpec& spec, const RealVector& theta1);

// The composite loss ell1(theta1; d1) + p * q(theta1) * ell2(theta2; d2),
// bounded in [-9p/2, 9/2].
double composite_loss(const BasinLossSpec& spec, const ParamPoint& theta,
                      const DataPoint& d);

// Analytic gradient of the composite loss:
//   d/dtheta1 = grad ell1 + p * ell2(theta2; d2) * grad q(theta1)
//   d/dtheta2 = p * q(theta1) * grad ell2
// Subgradient conventions at the non-smooth loci: the zero branch at both
// clamp boundaries, the flat-side value (zero) at the gate kinks, and
// grad q = 0 at theta1 = 0.
void composite_grad(const BasinLossSpec& spec, const ParamPoint& theta,
                    const DataPoint& d, ParamPoint& out);
ParamPoint composite_grad(const BasinLossSpec& spec, const ParamPoint& theta,
                          const DataPoint& d);

// Constrained quadratic variant: ||theta1 - d1||^2 / 2
// + (p / (2 r^2)) ||theta2 - d2||^2.
double quadratic_loss(const QuadraticLossSpec& spec, const ParamPoint& theta,
                      const DataPoint& d);
void quadratic_grad(const QuadraticLossSpec& spec, const ParamPoint& theta,
                    const DataPoint& d, ParamPoint& out);
ParamPoint quadratic_grad(const QuadraticLossSpec& spec,
                          const ParamPoint& theta, const DataPoint& d);

// Per-example loss family, the interface the optimizers run against.
class LossFamily {
 public:
  virtual ~LossFamily() = default;
  virtual double value(const ParamPoint& theta, const DataPoint& d) const = 0;
  virtual void gradient(const ParamPoint& theta, const DataPoint& d,
                        ParamPoint& out) const = 0;
  virtual std::size_t dim1() const = 0;
  virtual std::size_t dim2() const = 0;
};

class BasinLoss final : public LossFamily {
 public:
  explicit BasinLoss(BasinLossSpec spec) : spec_(spec) { spec_.validate(); }
  const BasinLossSpec& spec() const { return spec_; }
  double value(const ParamPoint& theta, const DataPoint& d) const override;
  void gradient(const ParamPoint& theta, const DataPoint& d,
                ParamPoint& out) const override;
  std::size_t dim1() const override { return spec_.dim1; }
  std::size_t dim2() const override { return spec_.dim2; }

 private:
  BasinLossSpec spec_;
};

class QuadraticLoss final : public LossFamily {
 public:
  explicit QuadraticLoss(QuadraticLossSpec spec) : spec_(spec) {
    spec_.validate();
  }
  const QuadraticLossSpec& spec() const { return spec_; }
  double value(const ParamPoint& theta, const DataPoint& d) const override;
  void gradient(const ParamPoint& theta, const DataPoint& d,
                ParamPoint& out) const override;
  std::size_t dim1() const override { return spec_.dim1; }
  std::size_t dim2() const override { return spec_.dim2; }

 private:
  QuadraticLossSpec spec_;
};

struct ClosedFormResult {
  double value = 0.0;
  bool valid = false;
};

// Closed-form population loss of the composite construction over the task's
// private distribution. Valid only in the regime ||theta1|| <= 2,
// ||theta2|| <= 2r, where both clamps are provably inactive and
//   E ell1 = (||theta1 - mu1||^2 + E||d1 - mu1||^2) / 2,
//   E ell2 = (||theta2 - mu2||^2 + E||d2 - mu2||^2) / (2 r^2) - 9/2.
// Outside that regime `valid` is false and callers fall back to Monte Carlo.
ClosedFormResult population_loss_closed_form(const BasinLossSpec& spec,
                                             const TaskInstance& task,
                                             const ParamPoint& theta);

// Exact population loss of the quadratic variant (no clamps, no regime).
double quadratic_population_loss(const QuadraticLossSpec& spec,
                                 const TaskInstance& task,
                                 const ParamPoint& theta);

struct McResult {
  double estimate = 0.0;
  double stderr_mean = 0.0;
};

// Monte Carlo estimate of E_{d ~ dist} loss(theta; d) over n_mc fresh draws.
// Work is split into fixed-size chunks, each with its own derived stream and
// its own accumulator, merged in chunk order; the result is identical for
// any thread count. `population_loss_mc_serial` is the plain-loop reference
// used by tests and the benchmark.
McResult population_loss_mc(const LossFamily& loss,
                            const ProductDistribution& dist,
                            const ParamPoint& theta, long n_mc,
                            const RngStream& base);
McResult population_loss_mc_serial(const LossFamily& loss,
                                   const ProductDistribution& dist,
                                   const ParamPoint& theta, long n_mc,
                                   const RngStream& base);

enum class EvaluatorKind { closed_form, monte_carlo };

struct RiskResult {
  double excess = 0.0;
  EvaluatorKind evaluator = EvaluatorKind::closed_form;
};

enum class EvaluatorPreference { closed_form_when_valid, monte_carlo };

// Excess population risk L(theta) - L(theta*) on the composite loss.
// theta* = (mu1, mu2) is always in the closed-form regime; L(theta) uses the
// closed form when valid (unless Monte Carlo is forced), else Monte Carlo.
RiskResult excess_risk(const BasinLossSpec& spec, const TaskInstance& task,
                       const ParamPoint& theta, EvaluatorPreference pref,
                       long n_mc, const RngStream& mc_stream);

// Same for the quadratic variant; always closed form.
double quadratic_excess_risk(const QuadraticLossSpec& spec,
                             const TaskInstance& task, const ParamPoint& theta);

}  // namespace basinsep

#endif  // BASINSEP_LOSS_HPP_
