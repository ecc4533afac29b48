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

#ifndef BASINSEP_LANDSCAPE_HPP_
#define BASINSEP_LANDSCAPE_HPP_

#include <functional>
#include <string>
#include <vector>

#include "basinsep/loss.hpp"
#include "basinsep/vec.hpp"

namespace basinsep {

struct AxisSpec {
  double lo = 0.0;
  double hi = 1.0;
  long n = 2;

  double at(long i) const;
  void validate() const;
};

// Row-major grid of loss values: values[i * axis2.n + j] belongs to
// (axis1.at(i), axis2.at(j)). 1D results use axis2.n = 1.
struct GridResult {
  AxisSpec axis1;
  AxisSpec axis2;
  std::vector<double> values;
  std::string label1 = "theta1";
  std::string label2 = "theta2";

  double at(long i, long j) const;
};

// Composite loss along theta1 for each fixed scalar theta2, toy-mode specs
// only (one-dimensional blocks). One grid per theta2 value.
std::vector<GridResult> slice_1d(const BasinLossSpec& spec, const DataPoint& d,
                                 const std::vector<double>& theta2_fixed,
                                 const AxisSpec& range1);

// Composite loss over the (theta1, theta2) product grid, toy mode.
GridResult heatmap_2d(const BasinLossSpec& spec, const DataPoint& d,
                      const AxisSpec& range1, const AxisSpec& range2);

// Loss over the plane through three points:
// theta(u, v) = A + u (B - A) + v (C - A). Corners reproduce the inputs'
// losses exactly.
using PointEvaluator = std::function<double(const ParamPoint&)>;
GridResult interpolation_plane(const PointEvaluator& evaluator,
                               const ParamPoint& a, const ParamPoint& b,
                               const ParamPoint& c, const AxisSpec& u_axis,
                               const AxisSpec& v_axis);

// Serial reference for the grid evaluators (the parallel versions must match
// it exactly).
GridResult heatmap_2d_serial(const BasinLossSpec& spec, const DataPoint& d,
                             const AxisSpec& range1, const AxisSpec& range2);

// Symmetric matrix of Euclidean distances between points (joint over both
// blocks), zero diagonal.
std::vector<std::vector<double>> pairwise_distances(
    const std::vector<ParamPoint>& points);

// Indices of strict interior local minima of a 1D slice.
std::vector<long> local_minima(const GridResult& slice);

// Least-squares (u, v) coordinates of a point relative to the plane spanned
// by (B - A, C - A).
struct PlaneCoords {
  double u = 0.0;
  double v = 0.0;
};
PlaneCoords project_to_plane(const ParamPoint& a, const ParamPoint& b,
                             const ParamPoint& c, const ParamPoint& x);

// True when the two cells belong to the same 4-connected component of the
// sublevel set {value <= level}.
bool same_sublevel_component(const GridResult& grid, long i0, long j0, long i1,
                             long j1, double level);

// Grid cell nearest to the given axis coordinates.
void nearest_cell(const GridResult& grid, double x1, double x2, long* i,
                  long* j);

}  // namespace basinsep

#endif  // BASINSEP_LANDSCAPE_HPP_
