// Copyright 2026 The condyn Authors
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

// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "condyn/analysis.hpp"
#include "condyn/oracle.hpp"
#include "condyn/trajectories.hpp"

using namespace condyn;

namespace {

TrajectoryConfig bench_config() {
    TrajectoryConfig c;
    c.epsilon = 0.05;
    c.steps = 2000;
    c.seed = 1;
    return c;
}

void BM_ensemble_parallel(benchmark::State &state) {
    auto cfg = bench_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_ensemble(cfg, state.range(0)));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * cfg.steps);
}
BENCHMARK(BM_ensemble_parallel)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ensemble_serial(benchmark::State &state) {
    auto cfg = bench_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_ensemble_serial(cfg, state.range(0)));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * cfg.steps);
}
BENCHMARK(BM_ensemble_serial)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_summary_parallel(benchmark::State &state) {
    auto cfg = bench_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(summarize_ensemble(cfg, state.range(0)));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * cfg.steps);
}
BENCHMARK(BM_summary_parallel)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_summary_serial(benchmark::State &state) {
    auto cfg = bench_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(summarize_ensemble_serial(cfg, state.range(0)));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * cfg.steps);
}
BENCHMARK(BM_summary_serial)->Arg(256)->Unit(benchmark::kMillisecond);

const DensityMatrix kRho(0.4, Complex(0.1, -0.2), 0.6);
const ObserverPair kObs{MeasurementAxis(0.6, 0, 0.8), MeasurementAxis::from_z(0.3)};

void BM_enumeration_parallel(benchmark::State &state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_joint_distribution(kRho, kObs, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_enumeration_parallel)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_enumeration_serial(benchmark::State &state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_joint_distribution_serial(kRho, kObs, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_enumeration_serial)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
