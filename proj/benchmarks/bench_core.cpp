// Copyright 2026 The qcond Authors
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

#include "qcond/channels.hpp"
#include "qcond/checks.hpp"
#include "qcond/matkernel.hpp"
#include "qcond/measmodel.hpp"
#include "qcond/random.hpp"

namespace {

using namespace qcond;

void BM_ChannelApply(benchmark::State &state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  SplitMix64 rng(1);
  const Channel ch = random_channel(d, d, 4, rng);
  const State rho = random_state(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(qcond::apply(ch, rho));
}
BENCHMARK(BM_ChannelApply)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_ChannelDual(benchmark::State &state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  SplitMix64 rng(2);
  const Channel ch = random_channel(d, d, 4, rng);
  const Effect a = random_effect(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(dual(ch, a.matrix()));
}
BENCHMARK(BM_ChannelDual)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_PartialTrace(benchmark::State &state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  SplitMix64 rng(3);
  const CMatrix m = random_state(d * d, rng).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace_right(m, d, d));
}
BENCHMARK(BM_PartialTrace)->Arg(2)->Arg(4)->Arg(8);

void BM_MeasuredBiInstrument(benchmark::State &state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  SplitMix64 rng(4);
  const Observable probe = random_observable(2, 2, rng);
  const MeasurementModel m(d, 2, random_instrument(d, 2 * d, 2, rng), probe);
  for (auto _ : state) benchmark::DoNotOptimize(measured_bi_instrument(m));
}
BENCHMARK(BM_MeasuredBiInstrument)->Arg(2)->Arg(3)->Arg(4);

void BM_CheckSuite(benchmark::State &state) {
  CheckOptions opts;
  opts.trials = 10;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_checks(opts));
}
BENCHMARK(BM_CheckSuite)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
