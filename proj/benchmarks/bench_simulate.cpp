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

#include "affine_recur/measures.hpp"

using namespace affine_recur;

namespace {

AffineSystem sim_system() {
  std::vector<AffineContraction> maps;
  maps.emplace_back(Matrix(2, {1.0 / 3, 0, 0, 1.0 / 3}), std::vector<double>{0, 0});
  maps.emplace_back(Matrix(2, {1.0 / 3, 0, 0, 1.0 / 3}), std::vector<double>{1, 0});
  return AffineSystem(std::move(maps));
}

}  // namespace

static void SimulateBernoulli(benchmark::State& state) {
  const AffineSystem sys = sim_system();
  const auto mu = CylinderMeasure::bernoulli(sys, {0.5, 0.5});
  const TargetPoint j = TargetPoint::periodic(Word({0}, 2));
  const LengthSchedule sched = LengthSchedule::log2(1.0);
  const std::int64_t samples = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_recurrence(sys, mu, j, sched, 64, samples, 7));
  }
  state.SetItemsProcessed(state.iterations() * samples);
}
BENCHMARK(SimulateBernoulli)->Arg(1 << 10)->Arg(1 << 14);

static void GibbsExhaustive(benchmark::State& state) {
  const AffineSystem sys = sim_system();
  const auto mu = CylinderMeasure::bernoulli(sys, {0.5, 0.5});
  const double t = 0.63;
  const PressureBracket bracket = ordinary_pressure(sys, t, 6);
  const int level = static_cast<int>(state.range(0));
  std::vector<int> levels;
  for (int l = 1; l <= level; ++l) levels.push_back(l);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gibbs_check(sys, mu, t, levels, std::int64_t{1} << 30, bracket));
  }
}
BENCHMARK(GibbsExhaustive)->Arg(8)->Arg(12);
