// Copyright 2026 The scorekit Authors
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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "scorekit/baseline.hpp"
#include "scorekit/compatibility.hpp"
#include "scorekit/estimation.hpp"
#include "scorekit/parametric_model.hpp"
#include "scorekit/portfolio.hpp"
#include "scorekit/weighted_family.hpp"

namespace {

using namespace scorekit;

std::vector<Distribution> draws(std::size_t count, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Distribution> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(sample_interior(m, rng, 0.1 / static_cast<double>(m)));
  return out;
}

void BM_ScoreLog(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto d = draws(2, m, 1);
  const ScoringRule rule = log_rule();
  for (auto _ : state) benchmark::DoNotOptimize(rule.score(d[0], d[1]));
}
BENCHMARK(BM_ScoreLog)->Arg(3)->Arg(5)->Arg(64);

void BM_MemberGradient(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto d = draws(3, m, 2);
  const ScoringRule member = weighted_pseudospherical_family(3).member(d[0]);
  for (auto _ : state) benchmark::DoNotOptimize(grad_p(member, d[1], d[2]));
}
BENCHMARK(BM_MemberGradient)->Arg(3)->Arg(5)->Arg(64);

void BM_Baseline(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const Distribution q = draws(1, m, 3)[0];
  const ScoringRule member = weighted_power_family(2).member(q);
  for (auto _ : state) benchmark::DoNotOptimize(baseline(member, m));
}
BENCHMARK(BM_Baseline)->Arg(3)->Arg(5);

void BM_CheckCompatibility(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto qs = draws(5, m, 4);
  const auto rs = draws(5, m, 5);
  const WeightedFamily fam = weighted_power_family(3);
  const ScoringRule rule = log_rule();
  for (auto _ : state) benchmark::DoNotOptimize(check_compatibility(fam, rule, qs, rs));
}
BENCHMARK(BM_CheckCompatibility)->Arg(3)->Arg(5);

void BM_OptimizeSoftmax(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const ParametricModel model = softmax_model(m);
  const Distribution r = draws(1, m, 6)[0];
  const ScoringRule rule = state.range(1) == 0 ? log_rule() : power_rule(2);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_score(rule, model, r));
}
BENCHMARK(BM_OptimizeSoftmax)->Args({3, 0})->Args({3, 1})->Args({5, 0})->Args({5, 1});

void BM_OptimizeBinomialSquares(benchmark::State& state) {
  const ParametricModel model = binomial_squares_model();
  const Distribution r = make_distribution({0.5, 0.2, 0.3});
  const ScoringRule rule = log_rule();
  for (auto _ : state) benchmark::DoNotOptimize(optimize_score(rule, model, r));
}
BENCHMARK(BM_OptimizeBinomialSquares);

void BM_BestPortfolio(benchmark::State& state) {
  const ParametricModel model = binomial_squares_model();
  std::vector<int> history{1, 1, 1, 1, 1, 2, 2, 3, 3, 3};
  const Market market = price_assets(log_rule(), model, history);
  const WeightedFamily fam = weighted_power_family(2);
  for (auto _ : state) benchmark::DoNotOptimize(best_portfolio(fam, market, model));
}
BENCHMARK(BM_BestPortfolio);

}  // namespace

BENCHMARK_MAIN();
