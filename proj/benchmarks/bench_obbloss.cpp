// Copyright 2026 The obbloss Authors.
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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "obbloss/analysis.hpp"
#include "obbloss/fitting.hpp"
#include "obbloss/gaussian.hpp"
#include "obbloss/geometry.hpp"
#include "obbloss/losses.hpp"

namespace {

using namespace obbloss;

std::vector<std::pair<OrientedBox, OrientedBox>> make_pairs(std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> c(-2, 2), e(0.5, 6), t(-kPi, kPi);
  std::vector<std::pair<OrientedBox, OrientedBox>> v(n);
  for (auto& [a, b] : v) {
    a = {c(rng), c(rng), e(rng), e(rng), t(rng)};
    b = {c(rng), c(rng), e(rng), e(rng), t(rng)};
  }
  return v;
}

const auto& pairs() {
  static const auto v = make_pairs(1024);
  return v;
}

template <typename F>
void over_pairs(benchmark::State& state, F f) {
  const auto& v = pairs();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = v[i++ & 1023];
    benchmark::DoNotOptimize(f(a, b));
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_SkewIou(benchmark::State& s) { over_pairs(s, [](auto& a, auto& b) { return skew_iou(a, b); }); }
void BM_Kfiou(benchmark::State& s) { over_pairs(s, [](auto& a, auto& b) { return kfiou(a, b); }); }
void BM_Mkiou(benchmark::State& s) { over_pairs(s, [](auto& a, auto& b) { return mkiou(a, b); }); }

void BM_RegLoss(benchmark::State& s) {
  const LossConfig cfg;
  over_pairs(s, [&](auto& a, auto& b) { return reg_loss_total(a, b, cfg); });
}

void BM_NumericGrad(benchmark::State& s) {
  const LossConfig cfg;
  over_pairs(s, [&](auto& a, auto& b) { return numeric_grad(reg_loss_total, a, b, cfg, 1e-6)[4]; });
}

void BM_MonteCarloIou(benchmark::State& s) {
  const auto samples = static_cast<std::size_t>(s.range(0));
  over_pairs(s, [&](auto& a, auto& b) { return monte_carlo_iou(a, b, samples, 1); });
}

void BM_Fit(benchmark::State& s) {
  const auto scenario = static_cast<Scenario>(s.range(0));
  const FitSpec spec = make_scenario_spec(scenario, LossConfig{}, 7);
  for (auto _ : s) benchmark::DoNotOptimize(fit(spec).final_iou);
  s.SetLabel(std::string(to_string(scenario)));
}

void BM_SweepWh(benchmark::State& s) {
  const std::vector<double> alphas{3, 2, 1};
  for (auto _ : s) {
    benchmark::DoNotOptimize(sweep_wh({0, 0, 4, 2, 0}, {0.5, 2.0}, 151, alphas).rows.size());
  }
}

}  // namespace

BENCHMARK(BM_SkewIou);
BENCHMARK(BM_Kfiou);
BENCHMARK(BM_Mkiou);
BENCHMARK(BM_RegLoss);
BENCHMARK(BM_NumericGrad);
BENCHMARK(BM_MonteCarloIou)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Fit)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepWh)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
