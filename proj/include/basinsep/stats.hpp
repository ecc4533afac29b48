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

#ifndef BASINSEP_STATS_HPP_
#define BASINSEP_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace basinsep {

// Streaming mean/variance (Welford). Merging is exact for constant inputs,
// which the point-mass tests rely on.
struct RunningMoments {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const RunningMoments& other) {
    if (other.n == 0) return;
    if (n == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(other.n);
    const double d = other.mean - mean;
    mean += d * nb / (na + nb);
    m2 += other.m2 + d * d * na * nb / (na + nb);
    n += other.n;
  }

  double variance() const {
    if (n < 2) return 0.0;
    return std::max(0.0, m2 / static_cast<double>(n - 1));
  }

  double stddev() const { return std::sqrt(variance()); }

  // Standard error of the mean.
  double stderr_mean() const {
    if (n < 2) return 0.0;
    return stddev() / std::sqrt(static_cast<double>(n));
  }
};

// Linear-interpolation quantile (the common "type 7" definition).
inline double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile: empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q in [0,1]");
  std::sort(xs.begin(), xs.end());
  const double h = q * static_cast<double>(xs.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= xs.size()) return xs.back();
  const double frac = h - static_cast<double>(lo);
  return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

inline double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

// Standard error of the sample median under the normal approximation,
// se = 1.2533 * s / sqrt(n).
inline double stderr_median(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  RunningMoments m;
  for (double x : xs) m.add(x);
  return 1.2533141373155003 * m.stddev() /
         std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace basinsep

#endif  // BASINSEP_STATS_HPP_
