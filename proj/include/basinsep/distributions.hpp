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

#ifndef BASINSEP_DISTRIBUTIONS_HPP_
#define BASINSEP_DISTRIBUTIONS_HPP_

#include <cstddef>
#include <variant>
#include <vector>

#include "basinsep/loss_spec.hpp"
#include "basinsep/rng.hpp"
#include "basinsep/vec.hpp"

namespace basinsep {

// Biased radial sign vectors: every sample has coordinates
// +-scale/sqrt(dim), so its norm is exactly `scale`, and the per-coordinate
// sign biases are chosen so the expectation equals `mean`. This gives exact
// mean control with per-coordinate variance ~ scale^2/dim, i.e. total
// variance scale^2 - ||mean||^2.
class SignMeanDistribution {
 public:
  // Requires |mean_i| <= scale/sqrt(dim) for every coordinate.
  SignMeanDistribution(RealVector mean, double scale);

  std::size_t dim() const { return mean_.dim(); }
  const RealVector& mean() const { return mean_; }
  double scale() const { return scale_; }

  // E ||d - mean||^2, exact for this family.
  double mean_square_spread() const;

  RealVector sample(RngStream& stream) const;

 private:
  RealVector mean_;
  double scale_;
  std::vector<double> prob_plus_;  // per-coordinate P(+scale/sqrt(dim))
  double magnitude_;               // scale / sqrt(dim)
};

class PointMass {
 public:
  PointMass() = default;  // zero-dimensional placeholder
  explicit PointMass(RealVector point) : point_(std::move(point)) {}
  static PointMass at_origin(std::size_t dim) {
    return PointMass(RealVector(dim));
  }

  std::size_t dim() const { return point_.dim(); }
  const RealVector& mean() const { return point_; }
  double mean_square_spread() const { return 0.0; }
  RealVector sample(RngStream&) const { return point_; }

 private:
  RealVector point_;
};

using Distribution = std::variant<PointMass, SignMeanDistribution>;

std::size_t distribution_dim(const Distribution& dist);
const RealVector& distribution_mean(const Distribution& dist);
double distribution_mean_square_spread(const Distribution& dist);
RealVector sample_one(const Distribution& dist, RngStream& stream);

// n independent draws, deterministic given the stream.
std::vector<RealVector> sample(const Distribution& dist, RngStream& stream,
                               std::size_t n);

// Product distribution over (d1, d2).
struct ProductDistribution {
  Distribution first;
  Distribution second;
};

enum class DataOrigin { public_data, private_data };

struct DataPoint {
  RealVector d1;
  RealVector d2;
};

struct Dataset {
  std::vector<DataPoint> points;
  DataOrigin origin;

  std::size_t size() const { return points.size(); }
};

Dataset sample_dataset(const ProductDistribution& dist, RngStream& stream,
                       std::size_t n, DataOrigin origin);

// Hard instance for the private learner: mean with coordinates +-M/sqrt(dim)
// (signs drawn from the stream), support on the unit sphere. Requires M <= 1.
SignMeanDistribution make_private_hard_instance(std::size_t dim, double M,
                                                RngStream stream);

// Hard instance for the public learner: same family shrunk to the ball of
// radius r, with ||mean|| = rho * r. Requires rho in (0, 1).
SignMeanDistribution make_public_hard_instance(std::size_t dim, double r,
                                               double rho, RngStream stream);

enum class TaskMode { id, ood };

// A paired public/private learning task. The private distribution is always
// the product of the two hard instances; in OOD mode the public second
// factor is replaced by a point mass at the origin.
struct TaskInstance {
  BasinLossSpec spec;
  ProductDistribution pub_dist;
  ProductDistribution priv_dist;
  RealVector mu1;
  RealVector mu2;
  TaskMode mode;

  ParamPoint minimizer() const { return ParamPoint(mu1, mu2); }
};

TaskInstance make_task(const BasinLossSpec& spec, TaskMode mode, double rho,
                       RngStream stream);

}  // namespace basinsep

#endif  // BASINSEP_DISTRIBUTIONS_HPP_
