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
#include "basinsep/stats.hpp"

using namespace basinsep;

TEST_CASE("private hard instance: exact norms and support") {
  RngStream stream = derive_stream(11, {"priv"});
  const std::size_t dim = 64;
  const double M = 0.5;
  SignMeanDistribution dist = make_private_hard_instance(dim, M, stream);
  CHECK(norm(dist.mean()) == doctest::Approx(M).epsilon(1e-12));
  CHECK(dist.scale() == 1.0);
  RngStream samples = derive_stream(11, {"priv_samples"});
  for (int k = 0; k < 200; ++k) {
    const RealVector d = dist.sample(samples);
    CHECK(std::abs(norm(d) - 1.0) < 1e-12);
  }
  CHECK_THROWS(make_private_hard_instance(dim, 1.5, stream));
}

TEST_CASE("public hard instance: scaled support and mean norm") {
  RngStream stream = derive_stream(11, {"pub"});
  SignMeanDistribution dist = make_public_hard_instance(4, 0.01, 0.5, stream);
  CHECK(norm(dist.mean()) == doctest::Approx(0.005).epsilon(1e-12));
  RngStream samples = derive_stream(11, {"pub_samples"});
  for (int k = 0; k < 200; ++k) {
    CHECK(std::abs(norm(dist.sample(samples)) - 0.01) < 1e-14);
  }
  CHECK_THROWS(make_public_hard_instance(4, 0.01, 1.5, stream));
  CHECK_THROWS(make_public_hard_instance(4, 0.01, 0.0, stream));
}

TEST_CASE("sign distribution: empirical mean concentrates coordinate-wise") {
  RngStream stream = derive_stream(11, {"conc"});
  const std::size_t dim = 8;
  SignMeanDistribution dist =
      make_public_hard_instance(dim, 0.1, 0.5, stream.child("mk"));
  RngStream samples = stream.child("samples");
  std::vector<RunningMoments> coord(dim);
  const long n = 100000;
  for (long k = 0; k < n; ++k) {
    const RealVector d = dist.sample(samples);
    for (std::size_t i = 0; i < dim; ++i) coord[i].add(d[i]);
  }
  for (std::size_t i = 0; i < dim; ++i) {
    CHECK(std::abs(coord[i].mean - dist.mean()[i]) <=
          5.0 * coord[i].stderr_mean());
  }
  // E[d_i] = (2 P(+) - 1)/sqrt(dim) * scale: the spread identity
  const double expected_spread =
      dist.scale() * dist.scale() - squared_norm(dist.mean());
  RunningMoments spread;
  RngStream more = stream.child("spread");
  for (long k = 0; k < n; ++k) {
    spread.add(squared_distance(dist.sample(more), dist.mean()));
  }
  CHECK(spread.mean == doctest::Approx(expected_spread).epsilon(0.02));
}

TEST_CASE("point mass and sampling determinism") {
  PointMass pm = PointMass::at_origin(3);
  RngStream stream = derive_stream(11, {"pm"});
  const std::vector<RealVector> draws = sample(Distribution{pm}, stream, 3);
  CHECK(draws.size() == 3);
  for (const RealVector& d : draws) CHECK(squared_norm(d) == 0.0);

  SignMeanDistribution dist =
      make_public_hard_instance(4, 0.01, 0.5, derive_stream(11, {"mk"}));
  RngStream s1 = derive_stream(11, {"dataset"});
  RngStream s2 = derive_stream(11, {"dataset"});
  const std::vector<RealVector> a = sample(Distribution{dist}, s1, 50);
  const std::vector<RealVector> b = sample(Distribution{dist}, s2, 50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(distance(a[i], b[i]) == 0.0);
  }
}

TEST_CASE("make_task: ID and OOD structure") {
  const BasinLossSpec spec = BasinLossSpec::desk_default();
  RngStream stream = derive_stream(11, {"task"});
  TaskInstance id_task = make_task(spec, TaskMode::id, 0.5, stream);
  CHECK(norm(id_task.mu1) == doctest::Approx(spec.M).epsilon(1e-12));
  CHECK(norm(id_task.mu2) == doctest::Approx(0.5 * spec.r).epsilon(1e-12));
  const ParamPoint star = id_task.minimizer();
  CHECK(distance(star.theta1, id_task.mu1) == 0.0);

  // ID: public and private second factors share parameters
  CHECK(distance(distribution_mean(id_task.pub_dist.second),
                 distribution_mean(id_task.priv_dist.second)) == 0.0);

  TaskInstance ood_task = make_task(spec, TaskMode::ood, 0.5, stream);
  RngStream sample_stream = derive_stream(11, {"ood_samples"});
  Dataset pub = sample_dataset(ood_task.pub_dist, sample_stream, 64,
                               DataOrigin::public_data);
  for (const DataPoint& d : pub.points) {
    CHECK(squared_norm(d.d2) == 0.0);
    CHECK(std::abs(norm(d.d1) - 1.0) < 1e-12);
  }
}
