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

#include "affine_recur/prng.hpp"
#include "affine_recur/svf.hpp"

using namespace affine_recur;

static Matrix random_matrix(SplitMix64& rng) {
  std::vector<double> entries(4);
  for (double& e : entries) e = rng.next_double() - 0.5;
  return Matrix(2, entries);
}

static void SingularValues2x2(benchmark::State& state) {
  SplitMix64 rng(1);
  const Matrix m = random_matrix(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(singular_values(m));
  }
}
BENCHMARK(SingularValues2x2);

static void LogPhi(benchmark::State& state) {
  SplitMix64 rng(2);
  const Matrix m = random_matrix(rng);
  const double t = 1.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_phi(t, m));
  }
}
BENCHMARK(LogPhi);

static void CocyclePush(benchmark::State& state) {
  SplitMix64 rng(3);
  const Matrix m = random_matrix(rng);
  CocycleAccumulator acc(2);
  for (auto _ : state) {
    acc.push_right(m);
  }
  benchmark::DoNotOptimize(acc.length());
}
BENCHMARK(CocyclePush);

BENCHMARK_MAIN();
