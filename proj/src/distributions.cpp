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

#include "basinsep/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace basinsep {

SignMeanDistribution::SignMeanDistribution(RealVector mean, double scale)
    : mean_(std::move(mean)), scale_(scale) {
  if (scale_ <= 0.0) {
    throw std::invalid_argument("SignMeanDistribution: scale must be > 0");
  }
  if (mean_.dim() == 0) {
    throw std::invalid_argument("SignMeanDistribution: dim must be >= 1");
  }
  const double root_dim = std::sqrt(static_cast<double>(mean_.dim()));
  magnitude_ = scale_ / root_dim;
  const double tol = 1e-12 * scale_;
  prob_plus_.resize(mean_.dim());
  for (std::size_t i = 0; i < mean_.dim(); ++i) {
    if (std::abs(mean_[i]) > magnitude_ + tol) {
      throw std::invalid_argument(
          "SignMeanDistribution: |mean_i| must be <= scale/sqrt(dim)");
    }
    // E[d_i] = (2 P(+) - 1) * magnitude = mean_i
    prob_plus_[i] = 0.5 * (1.0 + mean_[i] / magnitude_);
  }
}

double SignMeanDistribution::mean_square_spread() const {
  // Samples lie on the sphere of radius `scale`, so
  // E||d - mu||^2 = E||d||^2 - ||mu||^2 = scale^2 - ||mu||^2.
  return scale_ * scale_ - squared_norm(mean_);
}

RealVector SignMeanDistribution::sample(RngStream& stream) const {
  RealVector out(mean_.dim());
  for (std::size_t i = 0; i < mean_.dim(); ++i) {
    out[i] = stream.uniform() < prob_plus_[i] ? magnitude_ : -magnitude_;
  }
  return out;
}

std::size_t distribution_dim(const Distribution& dist) {
  return std::visit([](const auto& d) { return d.dim(); }, dist);
}

const RealVector& distribution_mean(const Distribution& dist) {
  return std::visit([](const auto& d) -> const RealVector& { return d.mean(); },
                    dist);
}

double distribution_mean_square_spread(const Distribution& dist) {
  return std::visit([](const auto& d) { return d.mean_square_spread(); },
                    dist);
}

RealVector sample_one(const Distribution& dist, RngStream& stream) {
  return std::visit([&stream](const auto& d) { return d.sample(stream); },
                    dist);
}

std::vector<RealVector> sample(const Distribution& dist, RngStream& stream,
                               std::size_t n) {
  if (n == 0) throw std::invalid_argument("sample: n must be >= 1");
  std::vector<RealVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_one(dist, stream));
  return out;
}

Dataset sample_dataset(const ProductDistribution& dist, RngStream& stream,
                       std::size_t n, DataOrigin origin) {
  if (n == 0) throw std::invalid_argument("sample_dataset: n must be >= 1");
  Dataset data;
  data.origin = origin;
  data.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    DataPoint d;
    d.d1 = sample_one(dist.first, stream);
    d.d2 = sample_one(dist.second, stream);
    data.points.push_back(std::move(d));
  }
  return data;
}

SignMeanDistribution make_private_hard_instance(std::size_t dim, double M,
                                                RngStream stream) {
  if (M > 1.0) {
    throw std::invalid_argument(
        "make_private_hard_instance: M must be <= 1 so the support stays in "
        "the unit ball");
  }
  if (M <= 0.0) {
    throw std::invalid_argument("make_private_hard_instance: M must be > 0");
  }
  const double coord = M / std::sqrt(static_cast<double>(dim));
  RealVector mean(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    mean[i] = stream.uniform() < 0.5 ? coord : -coord;
  }
  return SignMeanDistribution(std::move(mean), 1.0);
}

SignMeanDistribution make_public_hard_instance(std::size_t dim, double r,
                                               double rho, RngStream stream) {
  if (r <= 0.0) {
    throw std::invalid_argument("make_public_hard_instance: r must be > 0");
  }
  if (rho <= 0.0 || rho >= 1.0) {
    throw std::invalid_argument(
        "make_public_hard_instance: rho must be in (0, 1)");
  }
  const double coord = rho * r / std::sqrt(static_cast<double>(dim));
  RealVector mean(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    mean[i] = stream.uniform() < 0.5 ? coord : -coord;
  }
  return SignMeanDistribution(std::move(mean), r);
}

TaskInstance make_task(const BasinLossSpec& spec, TaskMode mode, double rho,
                       RngStream stream) {
  spec.validate();
  SignMeanDistribution first =
      make_private_hard_instance(spec.dim1, spec.M, stream.child("mu1"));
  SignMeanDistribution second =
      make_public_hard_instance(spec.dim2, spec.r, rho, stream.child("mu2"));

  TaskInstance task;
  task.spec = spec;
  task.mu1 = first.mean();
  task.mu2 = second.mean();
  task.mode = mode;
  task.priv_dist = ProductDistribution{first, second};
  if (mode == TaskMode::id) {
    task.pub_dist = task.priv_dist;
  } else {
    task.pub_dist =
        ProductDistribution{first, PointMass::at_origin(spec.dim2)};
  }
  return task;
}

}  // namespace basinsep
