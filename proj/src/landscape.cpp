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

#include "basinsep/landscape.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>
#include <utility>

namespace basinsep {

double AxisSpec::at(long i) const {
  if (n == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

void AxisSpec::validate() const {
  if (n < 1) throw std::invalid_argument("AxisSpec: empty range");
  if (n > 1 && !(hi > lo)) {
    throw std::invalid_argument("AxisSpec: requires hi > lo");
  }
}

double GridResult::at(long i, long j) const {
  return values[static_cast<std::size_t>(i * axis2.n + j)];
}

namespace {

void require_toy(const BasinLossSpec& spec, const char* who) {
  if (spec.dim1 != 1 || spec.dim2 != 1) {
    throw std::invalid_argument(std::string(who) +
                                ": requires one-dimensional blocks");
  }
}

RealVector scalar_vec(double x) {
  RealVector v(1);
  v[0] = x;
  return v;
}

}  // namespace

std::vector<GridResult> slice_1d(const BasinLossSpec& spec, const DataPoint& d,
                                 const std::vector<double>& theta2_fixed,
                                 const AxisSpec& range1) {
  require_toy(spec, "slice_1d");
  range1.validate();
  if (theta2_fixed.empty()) {
    throw std::invalid_argument("slice_1d: need at least one theta2 value");
  }
  std::vector<GridResult> slices;
  for (double t2 : theta2_fixed) {
    GridResult grid;
    grid.axis1 = range1;
    grid.axis2 = AxisSpec{t2, t2, 1};
    grid.values.assign(static_cast<std::size_t>(range1.n), 0.0);
    const ParamPoint base(RealVector(1), scalar_vec(t2));
#pragma omp parallel for schedule(static)
    for (long i = 0; i < range1.n; ++i) {
      ParamPoint theta = base;
      theta.theta1[0] = range1.at(i);
      grid.values[static_cast<std::size_t>(i)] = composite_loss(spec, theta, d);
    }
    slices.push_back(std::move(grid));
  }
  return slices;
}

namespace {

template <typename CellFn>
GridResult eval_grid(const AxisSpec& axis1, const AxisSpec& axis2,
                     const CellFn& cell, bool parallel) {
  axis1.validate();
  axis2.validate();
  GridResult grid;
  grid.axis1 = axis1;
  grid.axis2 = axis2;
  grid.values.assign(static_cast<std::size_t>(axis1.n * axis2.n), 0.0);
  const long total = axis1.n * axis2.n;
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long k = 0; k < total; ++k) {
      grid.values[static_cast<std::size_t>(k)] =
          cell(k / axis2.n, k % axis2.n);
    }
  } else {
    for (long k = 0; k < total; ++k) {
      grid.values[static_cast<std::size_t>(k)] =
          cell(k / axis2.n, k % axis2.n);
    }
  }
  return grid;
}

}  // namespace

GridResult heatmap_2d(const BasinLossSpec& spec, const DataPoint& d,
                      const AxisSpec& range1, const AxisSpec& range2) {
  require_toy(spec, "heatmap_2d");
  return eval_grid(range1, range2,
                   [&](long i, long j) {
                     const ParamPoint theta(scalar_vec(range1.at(i)),
                                            scalar_vec(range2.at(j)));
                     return composite_loss(spec, theta, d);
                   },
                   /*parallel=*/true);
}

GridResult heatmap_2d_serial(const BasinLossSpec& spec, const DataPoint& d,
                             const AxisSpec& range1, const AxisSpec& range2) {
  require_toy(spec, "heatmap_2d");
  return eval_grid(range1, range2,
                   [&](long i, long j) {
                     const ParamPoint theta(scalar_vec(range1.at(i)),
                                            scalar_vec(range2.at(j)));
                     return composite_loss(spec, theta, d);
                   },
                   /*parallel=*/false);
}

GridResult interpolation_plane(const PointEvaluator& evaluator,
                               const ParamPoint& a, const ParamPoint& b,
                               const ParamPoint& c, const AxisSpec& u_axis,
                               const AxisSpec& v_axis) {
  if (a.theta1.dim() != b.theta1.dim() || a.theta1.dim() != c.theta1.dim() ||
      a.theta2.dim() != b.theta2.dim() || a.theta2.dim() != c.theta2.dim()) {
    throw std::invalid_argument("interpolation_plane: dimension mismatch");
  }
  GridResult grid = eval_grid(
      u_axis, v_axis,
      [&](long i, long j) {
        const double u = u_axis.at(i);
        const double v = v_axis.at(j);
        ParamPoint theta = a;
        for (std::size_t k = 0; k < a.theta1.dim(); ++k) {
          theta.theta1[k] += u * (b.theta1[k] - a.theta1[k]) +
                             v * (c.theta1[k] - a.theta1[k]);
        }
        for (std::size_t k = 0; k < a.theta2.dim(); ++k) {
          theta.theta2[k] += u * (b.theta2[k] - a.theta2[k]) +
                             v * (c.theta2[k] - a.theta2[k]);
        }
        return evaluator(theta);
      },
      /*parallel=*/true);
  grid.label1 = "u";
  grid.label2 = "v";
  return grid;
}

std::vector<std::vector<double>> pairwise_distances(
    const std::vector<ParamPoint>& points) {
  if (points.size() < 2) {
    throw std::invalid_argument("pairwise_distances: need at least 2 points");
  }
  const std::size_t n = points.size();
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = param_distance(points[i], points[j]);
      out[i][j] = dist;
      out[j][i] = dist;
    }
  }
  return out;
}

std::vector<long> local_minima(const GridResult& slice) {
  if (slice.axis2.n != 1) {
    throw std::invalid_argument("local_minima: expects a 1D slice");
  }
  std::vector<long> minima;
  for (long i = 1; i + 1 < slice.axis1.n; ++i) {
    const double v = slice.at(i, 0);
    if (v < slice.at(i - 1, 0) && v < slice.at(i + 1, 0)) {
      minima.push_back(i);
    }
  }
  return minima;
}

PlaneCoords project_to_plane(const ParamPoint& a, const ParamPoint& b,
                             const ParamPoint& c, const ParamPoint& x) {
  // Solve min_{u,v} || (x - a) - u (b - a) - v (c - a) ||^2 via the 2x2
  // normal equations.
  auto block_dot = [](const ParamPoint& p, const ParamPoint& q) {
    return dot(p.theta1, q.theta1) + dot(p.theta2, q.theta2);
  };
  auto diff = [](const ParamPoint& p, const ParamPoint& q) {
    return ParamPoint(sub(p.theta1, q.theta1), sub(p.theta2, q.theta2));
  };
  const ParamPoint e1 = diff(b, a);
  const ParamPoint e2 = diff(c, a);
  const ParamPoint rhs = diff(x, a);
  const double g11 = block_dot(e1, e1);
  const double g12 = block_dot(e1, e2);
  const double g22 = block_dot(e2, e2);
  const double r1 = block_dot(e1, rhs);
  const double r2 = block_dot(e2, rhs);
  const double det = g11 * g22 - g12 * g12;
  PlaneCoords coords;
  if (std::abs(det) < 1e-30) return coords;
  coords.u = (g22 * r1 - g12 * r2) / det;
  coords.v = (g11 * r2 - g12 * r1) / det;
  return coords;
}

bool same_sublevel_component(const GridResult& grid, long i0, long j0, long i1,
                             long j1, double level) {
  const long n1 = grid.axis1.n;
  const long n2 = grid.axis2.n;
  auto inside = [&](long i, long j) {
    return i >= 0 && i < n1 && j >= 0 && j < n2 && grid.at(i, j) <= level;
  };
  if (!inside(i0, j0) || !inside(i1, j1)) return false;
  std::vector<unsigned char> seen(static_cast<std::size_t>(n1 * n2), 0);
  std::deque<std::pair<long, long>> frontier;
  frontier.emplace_back(i0, j0);
  seen[static_cast<std::size_t>(i0 * n2 + j0)] = 1;
  while (!frontier.empty()) {
    auto [i, j] = frontier.front();
    frontier.pop_front();
    if (i == i1 && j == j1) return true;
    const long di[4] = {1, -1, 0, 0};
    const long dj[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const long ni = i + di[k];
      const long nj = j + dj[k];
      if (inside(ni, nj) && !seen[static_cast<std::size_t>(ni * n2 + nj)]) {
        seen[static_cast<std::size_t>(ni * n2 + nj)] = 1;
        frontier.emplace_back(ni, nj);
      }
    }
  }
  return false;
}

void nearest_cell(const GridResult& grid, double x1, double x2, long* i,
                  long* j) {
  auto nearest = [](const AxisSpec& axis, double x) {
    if (axis.n == 1) return 0L;
    const double step =
        (axis.hi - axis.lo) / static_cast<double>(axis.n - 1);
    long k = static_cast<long>(std::lround((x - axis.lo) / step));
    if (k < 0) k = 0;
    if (k >= axis.n) k = axis.n - 1;
    return k;
  };
  *i = nearest(grid.axis1, x1);
  *j = nearest(grid.axis2, x2);
}

}  // namespace basinsep
