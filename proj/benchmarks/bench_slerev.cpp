// Copyright 2026 The slerev Authors
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

#include <cmath>
#include <random>

#include "slerev/geometry.hpp"
#include "slerev/loewner.hpp"
#include "slerev/pipeline.hpp"
#include "slerev/sle_sampler.hpp"
#include "slerev/stats.hpp"

namespace {

using slerev::Complex;

slerev::LoewnerChain brownian_chain(std::size_t n, double dt) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> normal;
  slerev::LoewnerChain chain;
  double w = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    chain.append(dt, w);
    w += std::sqrt(2.0 * dt) * normal(gen);
  }
  return chain;
}

void BM_ForwardMap(benchmark::State& state) {
  const auto chain = brownian_chain(static_cast<std::size_t>(state.range(0)), 1e-3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(slerev::forward_map(chain, Complex{0.3, 0.7}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForwardMap)->Arg(1000)->Arg(25000);

void BM_TipExact(benchmark::State& state) {
  const auto chain = brownian_chain(static_cast<std::size_t>(state.range(0)), 1e-3);
  const slerev::TipTracer tracer(chain);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tracer.tip(chain.size()));
  }
}
BENCHMARK(BM_TipExact)->Arg(1000)->Arg(25000);

void BM_TipFarField(benchmark::State& state) {
  const auto chain = brownian_chain(static_cast<std::size_t>(state.range(0)), 1e-3);
  const slerev::TipTracer tracer(chain, 2.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tracer.tip(chain.size()));
  }
  state.counters["maps"] = static_cast<double>(tracer.last_map_count());
}
BENCHMARK(BM_TipFarField)->Arg(1000)->Arg(25000);

void BM_TraceCurve(benchmark::State& state) {
  const auto chain = brownian_chain(static_cast<std::size_t>(state.range(0)), 1e-3);
  std::size_t points = 0;
  for (auto _ : state) {
    const auto trace = slerev::trace_curve(chain);
    points = trace.size();
    benchmark::DoNotOptimize(trace.points.data());
  }
  state.counters["points"] = static_cast<double>(points);
}
BENCHMARK(BM_TraceCurve)->Arg(25000)->Unit(benchmark::kMillisecond);

void BM_SampleDriving(benchmark::State& state) {
  slerev::SleParams params;
  params.kappa = 2.0;
  params.right.points = {{1.0, 1.0}};
  slerev::SamplerConfig config;
  config.T = 25.0;
  std::uint64_t stream = 0;
  for (auto _ : state) {
    slerev::CounterRng rng(1, stream++);
    benchmark::DoNotOptimize(slerev::sample_driving(params, config, rng).w.back());
  }
}
BENCHMARK(BM_SampleDriving)->Unit(benchmark::kMillisecond);

void BM_WeightFactor(benchmark::State& state) {
  slerev::SleParams params;
  params.kappa = 2.0;
  params.right.points = {{1.0, 1.0}};
  slerev::SamplerConfig config;
  slerev::CounterRng rng(1, 0);
  const auto chain = slerev::path_to_chain(slerev::sample_driving(params, config, rng));
  slerev::TruncationPolicy policy;
  policy.T = 0.25 * chain.total_capacity();
  for (auto _ : state) {
    benchmark::DoNotOptimize(slerev::component_weight_factor(chain, params, 1, slerev::Side::kRight, policy).factor);
  }
}
BENCHMARK(BM_WeightFactor)->Unit(benchmark::kMicrosecond);

void BM_WeightedKs(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(3);
  std::normal_distribution<double> normal;
  slerev::WeightedEnsemble a;
  slerev::WeightedEnsemble b;
  for (std::size_t i = 0; i < n; ++i) {
    a.add({normal(gen)}, 0.0, 2 * i);
    b.add({normal(gen)}, 0.3 * normal(gen), 2 * i + 1);
  }
  slerev::KsOptions options;
  options.replicates = 500;
  for (auto _ : state) {
    benchmark::DoNotOptimize(slerev::weighted_ks(a, b, 0, options).p_value);
  }
}
BENCHMARK(BM_WeightedKs)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
