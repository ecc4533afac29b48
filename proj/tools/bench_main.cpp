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

// Timings of the OpenMP kernels against their serial references: the Monte
// Carlo population-loss estimator, the landscape grid evaluator, and the
// seed-parallel separation driver.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "basinsep/experiments.hpp"
#include "basinsep/landscape.hpp"
#include "basinsep/loss.hpp"

namespace {

using basinsep::AxisSpec;
using basinsep::BasinLoss;
using basinsep::BasinLossSpec;
using basinsep::DataPoint;
using basinsep::ParamPoint;
using basinsep::RealVector;
using basinsep::SeparationConfig;
using basinsep::TaskInstance;
using basinsep::TaskMode;

double time_ms(const std::function<void()>& fn, int reps) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    if (ms < best) best = ms;
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.2f ms %10.2f ms %8.2fx\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel",
              "speedup");

  const BasinLossSpec spec = BasinLossSpec::desk_default();
  const BasinLoss loss(spec);
  basinsep::RngStream stream = basinsep::derive_stream(7, {"bench"});
  TaskInstance task =
      basinsep::make_task(spec, TaskMode::id, 0.5, stream.child("task"));
  const ParamPoint theta = task.minimizer();

  {
    volatile double sink = 0.0;
    const long n_mc = 200000;
    const double serial = time_ms(
        [&] {
          sink = basinsep::population_loss_mc_serial(loss, task.priv_dist,
                                                     theta, n_mc,
                                                     stream.child("mc"))
                     .estimate;
        },
        3);
    const double parallel = time_ms(
        [&] {
          sink = basinsep::population_loss_mc(loss, task.priv_dist, theta,
                                              n_mc, stream.child("mc"))
                     .estimate;
        },
        3);
    (void)sink;
    report("population_loss_mc (2e5)", serial, parallel);
  }

  {
    const BasinLossSpec toy = BasinLossSpec::toy();
    DataPoint d;
    d.d1 = RealVector(std::vector<double>{0.5});
    d.d2 = RealVector(std::vector<double>{0.005});
    const AxisSpec a1{-1.0, 1.0, 1001};
    const AxisSpec a2{-0.02, 0.03, 601};
    volatile double sink = 0.0;
    const double serial = time_ms(
        [&] { sink = basinsep::heatmap_2d_serial(toy, d, a1, a2).values[0]; },
        3);
    const double parallel = time_ms(
        [&] { sink = basinsep::heatmap_2d(toy, d, a1, a2).values[0]; }, 3);
    (void)sink;
    report("heatmap_2d (1001x601)", serial, parallel);
  }

  {
    SeparationConfig config = SeparationConfig::desk_default();
    config.seeds = 4;
    config.n_priv = 128;
    config.n_pub = 32;
    config.n_mc = 10000;
    volatile double sink = 0.0;
    const int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
    const double serial = time_ms(
        [&] {
          sink = basinsep::run_separation(config, 7).summary[2].median;
        },
        2);
    omp_set_num_threads(max_threads);
    const double parallel = time_ms(
        [&] {
          sink = basinsep::run_separation(config, 7).summary[2].median;
        },
        2);
    (void)sink;
    report("run_separation (4 seeds)", serial, parallel);
  }

  return 0;
}
