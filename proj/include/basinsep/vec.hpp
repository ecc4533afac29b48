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

#ifndef BASINSEP_VEC_HPP_
#define BASINSEP_VEC_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "basinsep/rng.hpp"

namespace basinsep {

// Fixed-dimension real vector. Entries are always finite; constructors that
// accept arbitrary data reject NaN/Inf.
class RealVector {
 public:
  RealVector() = default;
  explicit RealVector(std::size_t dim) : values_(dim, 0.0) {}
  explicit RealVector(std::vector<double> values);

  static RealVector zeros(std::size_t dim) { return RealVector(dim); }

  std::size_t dim() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }

  // Throws if any entry is non-finite; `context` names the caller in the
  // error message.
  void check_finite(const char* context) const;

 private:
  std::vector<double> values_;
};

// Model iterate split into the two blocks of the construction.
struct ParamPoint {
  RealVector theta1;
  RealVector theta2;

  ParamPoint() = default;
  ParamPoint(RealVector t1, RealVector t2)
      : theta1(std::move(t1)), theta2(std::move(t2)) {}
  static ParamPoint zeros(std::size_t dim1, std::size_t dim2) {
    return ParamPoint(RealVector(dim1), RealVector(dim2));
  }
};

double dot(const RealVector& a, const RealVector& b);
double squared_norm(const RealVector& v);
double norm(const RealVector& v);
double squared_distance(const RealVector& a, const RealVector& b);
double distance(const RealVector& a, const RealVector& b);

RealVector add(const RealVector& a, const RealVector& b);
RealVector sub(const RealVector& a, const RealVector& b);
RealVector scale(const RealVector& v, double factor);

// y += alpha * x
void axpy(double alpha, const RealVector& x, RealVector& y);

double param_squared_norm(const ParamPoint& p);
double param_distance(const ParamPoint& a, const ParamPoint& b);

// dim i.i.d. draws from N(0, sigma^2). Rejects dim = 0 and sigma < 0;
// sigma = 0 yields the zero vector.
RealVector gaussian_vector(RngStream& stream, std::size_t dim, double sigma);

// Euclidean projection onto the closed ball B(0, radius):
// v / max{1, ||v|| / radius}. Requires radius > 0.
RealVector project_ball(const RealVector& v, double radius);

// Distance from a point of norm `vnorm` to the annulus
// {x : M - R1 <= ||x|| <= M + R1}; zero inside.
double annulus_distance(double vnorm, double M, double R1);

// Euclidean projection onto the closed annulus above. Requires 0 < R1 < M.
// The all-zero vector, equidistant from the entire inner sphere, maps to the
// fixed point (M - R1) * e1 so the operator stays deterministic.
RealVector project_annulus(const RealVector& v, double M, double R1);

}  // namespace basinsep

#endif  // BASINSEP_VEC_HPP_
