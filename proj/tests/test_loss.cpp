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

#include "basinsep/loss.hpp"
#include "basinsep/testing.hpp"

using namespace basinsep;

namespace {

RealVector vec1(double x) { return RealVector(std::vector<double>{x}); }

ParamPoint toy_point(double t1, double t2) {
  return ParamPoint(vec1(t1), vec1(t2));
}

DataPoint toy_data(double d1, double d2) {
  DataPoint d;
  d.d1 = vec1(d1);
  d.d2 = vec1(d2);
  return d;
}

}  // namespace

TEST_CASE("ell1: clamp and hand values") {
  const BasinLossSpec spec = BasinLossSpec::toy();
  CHECK(ell1(spec, vec1(0.7), vec1(0.7)) == 0.0);
  CHECK(ell1(spec, vec1(3.0), vec1(0.0)) == 4.5);
  CHECK(ell1(spec, vec1(5.0), vec1(0.0)) == 4.5);
  CHECK(ell1(spec, vec1(0.0), vec1(0.5)) == doctest::Approx(0.125));
  CHECK_THROWS(ell1(spec, RealVector(2), vec1(0.0)));
}

TEST_CASE("ell2: clamp and hand values") {
  const BasinLossSpec spec = BasinLossSpec::toy();  // r = 0.01
  CHECK(ell2(spec, vec1(0.005), vec1(0.005)) == -4.5);
  CHECK(ell2(spec, vec1(0.03), vec1(0.0)) == 0.0);  // distance 3r
  CHECK(ell2(spec, vec1(0.01), vec1(0.0)) == doctest::Approx(-4.0));
  CHECK(ell2(spec, vec1(10.0), vec1(0.0)) == 0.0);
}

TEST_CASE("q_gate: toy values") {
  const BasinLossSpec spec = BasinLossSpec::toy();
  CHECK(q_gate(spec, vec1(0.0)) == 0.0);
  CHECK(q_gate(spec, vec1(0.5)) == 1.0);
  CHECK(q_gate(spec, vec1(0.7)) == doctest::Approx(0.5));
  CHECK(q_gate(spec, vec1(-0.45)) == 1.0);
  CHECK(q_gate(spec, vec1(0.85)) == 0.0);

  BasinLossSpec hard = spec;
  hard.hard_gate = true;
  CHECK(q_gate(hard, vec1(0.7)) == 0.0);
  CHECK(q_gate(hard, vec1(0.5)) == 1.0);
}

TEST_CASE("composite_loss: toy minimizer and gate regimes") {
  const BasinLossSpec spec = BasinLossSpec::toy();
  const DataPoint d = toy_data(0.5, 0.005);
  CHECK(composite_loss(spec, toy_point(0.5, 0.005), d) == -4.5);

  // gate closed: value equals ell1 alone, independent of theta2
  const double at_zero = composite_loss(spec, toy_point(0.0, 0.003), d);
  CHECK(at_zero == ell1(spec, vec1(0.0), d.d1));
  CHECK(composite_loss(spec, toy_point(0.0, -0.008), d) == at_zero);

  // inside S: ell1 + p * ell2
  const double inside = composite_loss(spec, toy_point(0.45, 0.002), d);
  CHECK(inside == doctest::Approx(ell1(spec, vec1(0.45), d.d1) +
                                  ell2(spec, vec1(0.002), d.d2)));
}

TEST_CASE("composite_grad: conventions at the origin and in the basin") {
  const BasinLossSpec spec = BasinLossSpec::toy();
  const DataPoint d = toy_data(0.5, 0.005);
  const ParamPoint origin = toy_point(0.0, 0.0);
  const ParamPoint g = composite_grad(spec, origin, d);
  CHECK(g.theta2[0] == 0.0);              // gate closed at the origin
  CHECK(g.theta1[0] == doctest::Approx(-0.5));  // plain ell1 gradient

  // quadratic minimum in block two
  const ParamPoint at_min = toy_point(0.45, 0.005);
  CHECK(composite_grad(spec, at_min, d).theta2[0] == 0.0);
}

TEST_CASE("composite_grad matches finite differences at smooth points") {
  const BasinLossSpec spec = BasinLossSpec::desk_default();
  const BasinLoss loss(spec);
  RngStream stream = derive_stream(13, {"fd"});
  for (int trial = 0; trial < 100; ++trial) {
    const testing::SmoothPoint pt =
        testing::random_smooth_point(spec, stream, 1e-3);
    CHECK(testing::gradient_rel_error(loss, pt.theta, pt.d, 1e-6,
                                      1e-6 * spec.r) <= 1e-5);
  }
}

TEST_CASE("quadratic loss and gradient") {
  QuadraticLossSpec spec;
  spec.p = 1;
  spec.dim1 = 2;
  spec.dim2 = 2;
  spec.r = 1.0;
  spec.radius2 = 1.0;
  ParamPoint theta(RealVector(std::vector<double>{1.0, 0.0}),
                   RealVector(std::vector<double>{1.0, 0.0}));
  DataPoint d;
  d.d1 = RealVector(2);
  d.d2 = RealVector(2);
  CHECK(quadratic_loss(spec, theta, d) == doctest::Approx(1.0));
  DataPoint same;
  same.d1 = theta.theta1;
  same.d2 = theta.theta2;
  CHECK(quadratic_loss(spec, theta, same) == 0.0);

  const QuadraticLoss loss(spec);
  RngStream stream = derive_stream(13, {"qfd"});
  for (int trial = 0; trial < 100; ++trial) {
    const testing::SmoothPoint pt = testing::random_quadratic_point(spec, stream);
    CHECK(testing::gradient_rel_error(loss, pt.theta, pt.d, 1e-6, 1e-6) <=
          1e-5);
  }
}

TEST_CASE("closed-form population loss: regimes and hand values") {
  const BasinLossSpec spec = BasinLossSpec::desk_default();
  RngStream stream = derive_stream(13, {"cf"});
  TaskInstance task = make_task(spec, TaskMode::id, 0.5, stream);

  // at the minimizer: (1 - M^2)/2 + p ((r^2 - ||mu2||^2)/(2 r^2) - 9/2)
  const ClosedFormResult at_star =
      population_loss_closed_form(spec, task, task.minimizer());
  REQUIRE(at_star.valid);
  const double expected =
      0.5 * (1.0 - spec.M * spec.M) +
      static_cast<double>(spec.p) *
          ((spec.r * spec.r - squared_norm(task.mu2)) /
               (2.0 * spec.r * spec.r) -
           4.5);
  CHECK(at_star.value == doctest::Approx(expected).epsilon(1e-12));

  // gate closed: independent of theta2
  ParamPoint closed = ParamPoint::zeros(spec.dim1, spec.dim2);
  const double v0 = population_loss_closed_form(spec, task, closed).value;
  closed.theta2[0] = spec.r;
  CHECK(population_loss_closed_form(spec, task, closed).value == v0);

  // regime guard
  ParamPoint far = ParamPoint::zeros(spec.dim1, spec.dim2);
  far.theta1[0] = 3.0;
  CHECK_FALSE(population_loss_closed_form(spec, task, far).valid);
}

TEST_CASE("monte carlo evaluator: point mass exactness and stderr scaling") {
  const BasinLossSpec spec = BasinLossSpec::toy();
  const BasinLoss loss(spec);
  ProductDistribution pm{PointMass(vec1(0.5)), PointMass(vec1(0.005))};
  const ParamPoint theta = toy_point(0.5, 0.005);
  RngStream stream = derive_stream(13, {"mc"});
  const McResult mc = population_loss_mc(loss, pm, theta, 1000, stream);
  CHECK(mc.estimate == -4.5);
  CHECK(mc.stderr_mean == 0.0);

  // doubling n_mc shrinks the standard error by about sqrt(2)
  const BasinLossSpec desk = BasinLossSpec::desk_default();
  const BasinLoss desk_loss(desk);
  TaskInstance task = make_task(desk, TaskMode::id, 0.5, stream.child("task"));
  ParamPoint probe = task.minimizer();
  probe.theta1[0] += 0.3;
  const McResult small = population_loss_mc(desk_loss, task.priv_dist, probe,
                                            20000, stream.child("a"));
  const McResult big = population_loss_mc(desk_loss, task.priv_dist, probe,
                                          40000, stream.child("b"));
  CHECK(small.stderr_mean / big.stderr_mean ==
        doctest::Approx(std::sqrt(2.0)).epsilon(0.12));

  // parallel evaluator equals the serial reference bit for bit
  const McResult par = population_loss_mc(desk_loss, task.priv_dist, probe,
                                          30000, stream.child("c"));
  const McResult ser = population_loss_mc_serial(desk_loss, task.priv_dist,
                                                 probe, 30000, stream.child("c"));
  CHECK(par.estimate == ser.estimate);
  CHECK(par.stderr_mean == ser.stderr_mean);
}

TEST_CASE("closed form agrees with monte carlo at random valid points") {
  const BasinLossSpec spec = BasinLossSpec::desk_default();
  const BasinLoss loss(spec);
  RngStream stream = derive_stream(13, {"cfmc"});
  TaskInstance task = make_task(spec, TaskMode::id, 0.5, stream.child("task"));
  for (int trial = 0; trial < 20; ++trial) {
    ParamPoint theta(
        project_ball(gaussian_vector(stream, spec.dim1, 0.7), 1.9),
        project_ball(gaussian_vector(stream, spec.dim2, spec.r), 1.9 * spec.r));
    const ClosedFormResult cf = population_loss_closed_form(spec, task, theta);
    REQUIRE(cf.valid);
    const McResult mc = population_loss_mc(loss, task.priv_dist, theta, 100000,
                                           stream.child(trial));
    CHECK(std::abs(cf.value - mc.estimate) <=
          3.0 * std::max(mc.stderr_mean, 1e-12));
  }
}

TEST_CASE("excess risk: hand values") {
  const BasinLossSpec spec = BasinLossSpec::desk_default();
  RngStream stream = derive_stream(13, {"excess"});
  TaskInstance task = make_task(spec, TaskMode::id, 0.5, stream.child("task"));
  const RngStream mc = stream.child("mc");
  const auto eval = [&](const ParamPoint& theta) {
    return excess_risk(spec, task, theta,
                       EvaluatorPreference::closed_form_when_valid, 10000, mc);
  };

  CHECK(eval(task.minimizer()).excess == 0.0);

  // theta = (mu1, 0) with ||mu2|| = r/2: gap p ||mu2||^2 / (2 r^2) = p/8
  ParamPoint no_theta2(task.mu1, RealVector(spec.dim2));
  const RiskResult r1 = eval(no_theta2);
  CHECK(r1.evaluator == EvaluatorKind::closed_form);
  CHECK(r1.excess == doctest::Approx(static_cast<double>(spec.p) / 8.0)
                         .epsilon(1e-9));

  // theta = (0, mu2): the whole block-two bonus is forfeited, >= M^2/2
  ParamPoint no_theta1(RealVector(spec.dim1), task.mu2);
  CHECK(eval(no_theta1).excess >= 0.5 * spec.M * spec.M);
}

TEST_CASE("gate support: loss constant in theta2 when the gate is closed") {
  const BasinLossSpec spec = BasinLossSpec::desk_default();
  RngStream stream = derive_stream(13, {"gate"});
  int checked = 0;
  for (int trial = 0; trial < 300 && checked < 100; ++trial) {
    ParamPoint theta(gaussian_vector(stream, spec.dim1, 0.8),
                     gaussian_vector(stream, spec.dim2, spec.r));
    if (annulus_distance(norm(theta.theta1), spec.M, spec.R1) < spec.R2) {
      continue;
    }
    DataPoint d;
    d.d1 = project_ball(gaussian_vector(stream, spec.dim1, 0.5), 1.0);
    d.d2 = project_ball(gaussian_vector(stream, spec.dim2, spec.r), spec.r);
    const double base = composite_loss(spec, theta, d);
    ParamPoint perturbed = theta;
    perturbed.theta2 = gaussian_vector(stream, spec.dim2, 2.0 * spec.r);
    CHECK(composite_loss(spec, perturbed, d) == base);
    ++checked;
  }
  CHECK(checked == 100);
}
