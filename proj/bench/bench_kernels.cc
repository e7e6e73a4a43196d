// bench/bench_kernels.cc

// Copyright 2026 The spkid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS to vary the
// thread count; the serial variants ignore it.

#include <benchmark/benchmark.h>

#include <random>

#include "spkid/features.h"
#include "spkid/kernels.h"

namespace spkid {
namespace {

using kernels::Exec;

Matrix Random(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

Exec ExecOf(const benchmark::State &state) { return state.range(1) ? Exec::kParallel : Exec::kSerial; }

void BM_InitialPotentials(benchmark::State &state) {
  const Matrix data = Random(state.range(0), 12, 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::InitialPotentials(data, 16.0, ExecOf(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_GaussianDesign(benchmark::State &state) {
  const Matrix data = Random(state.range(0), 12, 2);
  const Matrix centers = Random(64, 12, 3);
  const std::vector<double> widths(64, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::GaussianDesign(data, centers, widths, ExecOf(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 64);
}

void BM_NearestCenterDistances(benchmark::State &state) {
  const Matrix data = Random(state.range(0), 12, 4);
  const Matrix centers = Random(64, 12, 5);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::NearestCenterDistances(data, centers, ExecOf(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 64);
}

void BM_AnalyzeFrames(benchmark::State &state) {
  const PipelineConfig config;
  const FrameAnalyzer analyzer(config);
  const Matrix frames = Random(state.range(0), config.frame_len, 6).array() - 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::AnalyzeFrames(analyzer, frames, ExecOf(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

// Args: {problem size, 0 = serial / 1 = parallel}
BENCHMARK(BM_InitialPotentials)->ArgsProduct({{256, 1024, 4096}, {0, 1}})->ArgNames({"T", "par"});
BENCHMARK(BM_GaussianDesign)->ArgsProduct({{1024, 8192}, {0, 1}})->ArgNames({"T", "par"});
BENCHMARK(BM_NearestCenterDistances)->ArgsProduct({{1024, 8192}, {0, 1}})->ArgNames({"T", "par"});
BENCHMARK(BM_AnalyzeFrames)->ArgsProduct({{200, 1000}, {0, 1}})->ArgNames({"frames", "par"});

}  // namespace
}  // namespace spkid

BENCHMARK_MAIN();
