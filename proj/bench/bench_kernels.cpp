// Copyright 2026 The SpaceGAN Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP kernels. The second benchmark argument selects
// the path: 0 = serial, 1 = parallel.

#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "spacegan/datasets.hpp"
#include "spacegan/ensemble.hpp"
#include "spacegan/geometry.hpp"
#include "spacegan/rng.hpp"
#include "spacegan/spacegan.hpp"
#include "spacegan/spatial_stats.hpp"

namespace {

using namespace spacegan;

Exec exec_of(const benchmark::State& state) {
  return state.range(1) == 0 ? Exec::serial : Exec::parallel;
}

Coordinates random_points(std::size_t n) {
  Rng rng(1);
  Coordinates c(n);
  for (auto& p : c) p = {rng.uniform(0, 100), rng.uniform(0, 100)};
  return c;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

void BM_KnnGraph(benchmark::State& state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(knn_graph(pts, 15, exec_of(state)));
}
BENCHMARK(BM_KnnGraph)->ArgsProduct({{1000, 4000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_LocalMoransI(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto w = to_weight_matrix(knn_graph(random_points(n), 15));
  Rng rng(2);
  std::vector<double> y(n);
  for (auto& v : y) v = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(local_morans_i(y, w, exec_of(state)));
}
BENCHMARK(BM_LocalMoransI)->ArgsProduct({{2000, 20000}, {0, 1}})->Unit(benchmark::kMicrosecond);

void BM_EvaluateSnapshot(benchmark::State& state) {
  const auto d = gen_toy1(0);
  const auto graph = queen_graph(kToy1Side, kToy1Side);
  const auto rows = all_rows(d.size());
  const auto layout = make_layout(d, rows, graph, 8);
  Rng rng(3);
  const auto g = make_generator(layout, 50, rng);
  const auto w = to_weight_matrix(graph);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        evaluate_snapshot(g, layout, d, graph, rows, w, 25, 4, exec_of(state)));
  }
}
BENCHMARK(BM_EvaluateSnapshot)->ArgsProduct({{400}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_EnsembleFitPredict(benchmark::State& state) {
  const auto d = gen_toy2(0);
  const auto graph = queen_graph(kToy2Side, kToy2Side);
  const auto rows = all_rows(d.size());
  const Matrix design = design_matrix(d, rows);
  for (auto _ : state) {
    const auto e = spatial_bootstrap(d, graph, rows, static_cast<std::size_t>(state.range(0)), 5,
                                     {}, exec_of(state));
    benchmark::DoNotOptimize(ensemble_predict(e, design, exec_of(state)));
  }
}
BENCHMARK(BM_EnsembleFitPredict)->ArgsProduct({{20}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
