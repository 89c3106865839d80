// Copyright 2026 The quatcomp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include "quatcomp/completion.hpp"
#include "quatcomp/mask_pattern.hpp"
#include "quatcomp/metrics.hpp"
#include "quatcomp/qsvd.hpp"
#include "quatcomp/synthetic.hpp"

using namespace quatcomp;

static void BM_MatMul(benchmark::State& state) {
  const Index n = state.range(0);
  const QMatrix a = random_qmatrix(n, n, 1);
  const QMatrix b = random_qmatrix(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_MatMul)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Qsvd(benchmark::State& state) {
  const Index n = state.range(0);
  const QMatrix a = random_qmatrix(n, n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(qsvd(a));
}
BENCHMARK(BM_Qsvd)->Arg(16)->Arg(60)->Arg(150)->Unit(benchmark::kMillisecond);

static void BM_Qsvt(benchmark::State& state) {
  const Index n = state.range(0);
  const QMatrix a = make_low_rank(SyntheticSpec{n, n, 3, 100.0, 4});
  for (auto _ : state) benchmark::DoNotOptimize(qsvt(a, 50.0));
}
BENCHMARK(BM_Qsvt)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_Solver(benchmark::State& state) {
  const auto method = static_cast<Method>(state.range(0));
  const QMatrix truth = make_low_rank(SyntheticSpec{60, 60, 3, 100.0, 5});
  const Mask mask = make_mask(RandomPattern{0.5, 6}, 60, 60);
  const QMatrix m = project(truth, mask);
  auto cfg = SolverConfig::defaults_for(method);
  cfg.rank = 3;
  double err = 0.0;
  int iterations = 0;
  for (auto _ : state) {
    const auto rep = complete(method, m, mask, cfg);
    err = relative_error(truth, rep.recovered);
    iterations = rep.outer_iterations;
  }
  state.SetLabel(std::string(to_string(method)));
  state.counters["rel_error"] = err;
  state.counters["outer_iterations"] = iterations;
}
BENCHMARK(BM_Solver)
    ->Arg(static_cast<int>(Method::Qtnn))
    ->Arg(static_cast<int>(Method::Wqtnn))
    ->Arg(static_cast<int>(Method::Dwqtnn))
    ->Arg(static_cast<int>(Method::QnnBaseline))
    ->Unit(benchmark::kMillisecond)
    ->Iterations(1);

static void BM_Ssim(benchmark::State& state) {
  const RgbImage a = make_test_image(300, 300, 7);
  const RgbImage b = make_test_image(300, 300, 8);
  for (auto _ : state) benchmark::DoNotOptimize(ssim(a, b));
}
BENCHMARK(BM_Ssim)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
