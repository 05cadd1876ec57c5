// Copyright 2026 The skpk Authors.
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

#include "skpk/capacity_region.hpp"
#include "skpk/info_measures.hpp"
#include "skpk/protocol_engine.hpp"
#include "skpk/secrecy_audit.hpp"

namespace {

using namespace skpk;

void BM_JointEntropy(benchmark::State& state) {
  const JointPmf3 pmf = random_pmf({4, 4, 4}, 1);
  const VarSet all = VarSet::from_mask(7);
  for (auto _ : state) benchmark::DoNotOptimize(entropy(pmf, all));
}
BENCHMARK(BM_JointEntropy);

void BM_OuterBound(benchmark::State& state) {
  const JointPmf3 pmf = random_pmf({3, 3, 3}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(outer_bound(pmf));
}
BENCHMARK(BM_OuterBound);

void BM_ExactAuditTimeShare(benchmark::State& state) {
  const Protocol p = time_share(example1_sk_protocol(), example1_pk_protocol(), 1, 2);
  const JointPmf3 pmf = xor_source();
  for (auto _ : state) benchmark::DoNotOptimize(exact_audit(p, pmf));
}
BENCHMARK(BM_ExactAuditTimeShare)->Unit(benchmark::kMicrosecond);

void BM_BinningRun(benchmark::State& state) {
  const JointPmf3 pmf = cascade_bsc_source(0.25, 0.1);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const Protocol p = binning_protocol(pmf, {n, 0.35, 0.1, 0.0, 7});
  const SampleBlock block = sample_iid(pmf, n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(run(p, block));
}
BENCHMARK(BM_BinningRun)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
