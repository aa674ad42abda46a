// Copyright 2026 The affine-recur Authors
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

#include "affine_recur/pressure.hpp"

using namespace affine_recur;

namespace {

AffineSystem bench_system() {
  std::vector<AffineContraction> maps;
  maps.emplace_back(Matrix(2, {0.35, -0.2, 0.2, 0.35}), std::vector<double>{0, 0});
  maps.emplace_back(Matrix(2, {0.4, 0.0, 0.0, 0.15}), std::vector<double>{1, 0});
  return AffineSystem(std::move(maps));
}

}  // namespace

static void LogSumPhiTree(benchmark::State& state) {
  const AffineSystem sys = bench_system();
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_sum_phi(sys, 1.2, depth, Word::empty(2)));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(LogSumPhiTree)->DenseRange(6, 18, 4)->Complexity();

static void OrdinaryPressureBracket(benchmark::State& state) {
  const AffineSystem sys = bench_system();
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ordinary_pressure(sys, 1.2, depth, 0.5));
  }
}
BENCHMARK(OrdinaryPressureBracket)->Arg(6)->Arg(10)->Arg(14);

static void ChiEstimateLinear(benchmark::State& state) {
  const AffineSystem sys = bench_system();
  const TargetPoint j = TargetPoint::periodic(Word({0}, 2));
  const LengthSchedule sched = LengthSchedule::linear(1.0);
  const std::int64_t depth = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chi_estimate(sys, 1.2, j, sched, depth));
  }
}
BENCHMARK(ChiEstimateLinear)->Arg(1 << 8)->Arg(1 << 12)->Arg(1 << 14);
