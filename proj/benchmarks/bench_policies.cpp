/*
Copyright 2026 The rosie Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
// Query time per policy on the star fixtures.

#include <benchmark/benchmark.h>

#include "support.hpp"

namespace rt = rosie::testing;

namespace {

const rosie::Dataset& correlated() {
  static const rosie::Dataset d = rt::dataset_from_nt(rt::correlated_star_nt({}));
  return d;
}

const rosie::Dataset& adversarial() {
  static const rosie::Dataset d = rt::dataset_from_nt(rt::correlated_star_nt(rt::adversarial_options()));
  return d;
}

const rosie::Dataset& uncorrelated() {
  static const rosie::Dataset d = rt::dataset_from_nt(rt::uncorrelated_nt(10000, 3));
  return d;
}

void run_policy(benchmark::State& state, const rosie::Dataset& d, const std::string& text) {
  rosie::Query q = rosie::parse_query(text);
  rosie::Policy p;
  p.kind = static_cast<rosie::PolicyKind>(state.range(0));
  std::size_t mats = 0, rows = 0;
  for (auto _ : state) {
    auto r = rosie::run(q, d, p);
    mats = r.trace.materializations();
    rows = r.result.size();
    benchmark::DoNotOptimize(rows);
  }
  state.SetLabel(rosie::policy_name(p.kind));
  state.counters["materializations"] = static_cast<double>(mats);
  state.counters["rows"] = static_cast<double>(rows);
}

void BM_Correlated(benchmark::State& state) {
  run_policy(state, correlated(), rt::correlated_star_queries().at(static_cast<std::size_t>(state.range(1))));
}

void BM_Adversarial(benchmark::State& state) { run_policy(state, adversarial(), rt::kAdversarialQuery); }

void BM_Uncorrelated(benchmark::State& state) {
  run_policy(state, uncorrelated(), rt::uncorrelated_queries().at(static_cast<std::size_t>(state.range(1))));
}

// range(0): 0 static, 1 eager, 2 rosie
BENCHMARK(BM_Correlated)->ArgsProduct({{0, 1, 2}, {0, 1, 2}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Adversarial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Uncorrelated)->ArgsProduct({{0, 1, 2}, {0, 1, 2}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
