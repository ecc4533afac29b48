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

#include "basinsep/vec.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace basinsep {

RealVector::RealVector(std::vector<double> values)
    : values_(std::move(values)) {
  check_finite("RealVector");
}

void RealVector::check_finite(const char* context) const {
  for (double x : values_) {
    if (!std::isfinite(x)) {
      throw std::runtime_error(std::string(context) +
                               ": non-finite vector entry");
    }
  }
}

namespace {

void require_same_dim(const RealVector& a, const RealVector& b,
                      const char* op) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch");
  }
}

}  // namespace

double dot(const RealVector& a, const RealVector& b) {
  require_same_dim(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(const RealVector& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.dim(); ++i) s += v[i] * v[i];
  return s;
}

double norm(const RealVector& v) { return std::sqrt(squared_norm(v)); }

double squared_distance(const RealVector& a, const RealVector& b) {
  require_same_dim(a, b, "squared_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double distance(const RealVector& a, const RealVector& b) {
  return std::sqrt(squared_distance(a, b));
}

RealVector add(const RealVector& a, const RealVector& b) {
  require_same_dim(a, b, "add");
  RealVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
  return out;
}

RealVector sub(const RealVector& a, const RealVector& b) {
  require_same_dim(a, b, "sub");
  RealVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
  return out;
}

RealVector scale(const RealVector& v, double factor) {
  RealVector out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = v[i] * factor;
  return out;
}

void axpy(double alpha, const RealVector& x, RealVector& y) {
  require_same_dim(x, y, "axpy");
  for (std::size_t i = 0; i < x.dim(); ++i) y[i] += alpha * x[i];
}

double param_squared_norm(const ParamPoint& p) {
  return squared_norm(p.theta1) + squared_norm(p.theta2);
}

double param_distance(const ParamPoint& a, const ParamPoint& b) {
  return std::sqrt(squared_distance(a.theta1, b.theta1) +
                   squared_distance(a.theta2, b.theta2));
}

RealVector gaussian_vector(RngStream& stream, std::size_t dim, double sigma) {
  if (dim == 0) {
    throw std::invalid_argument("gaussian_vector: dim must be >= 1");
  }
  if (sigma < 0.0) {
    throw std::invalid_argument("gaussian_vector: sigma must be >= 0");
  }
  RealVector out(dim);
  if (sigma == 0.0) return out;
  for (std::size_t i = 0; i < dim; ++i) out[i] = stream.gaussian(sigma);
  return out;
}

RealVector project_ball(const RealVector& v, double radius) {
  if (radius <= 0.0) {
    throw std::invalid_argument("project_ball: radius must be > 0");
  }
  const double n = norm(v);
  if (n <= radius) return v;
  return scale(v, radius / n);
}

double annulus_distance(double vnorm, double M, double R1) {
  if (vnorm < M - R1) return (M - R1) - vnorm;
  if (vnorm > M + R1) return vnorm - (M + R1);
  return 0.0;
}

RealVector project_annulus(const RealVector& v, double M, double R1) {
  if (!(R1 > 0.0 && R1 < M)) {
    throw std::invalid_argument("project_annulus: requires 0 < R1 < M");
  }
  const double n = norm(v);
  if (n == 0.0) {
    RealVector out(v.dim());
    out[0] = M - R1;
    return out;
  }
  if (n < M - R1) return scale(v, (M - R1) / n);
  if (n > M + R1) return scale(v, (M + R1) / n);
  return v;
}

}  // namespace basinsep
