// Copyright 2026 The acore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "acore/harness.h"
#include "acore/kernels.h"
#include "acore/puf.h"
#include "acore/workflow.h"

namespace {

using namespace acore;

std::vector<puf::PufInstance> Instances(size_t count) {
  Rng rng(7);
  puf::PufParams params;
  std::vector<puf::PufInstance> out;
  for (size_t i = 0; i < count; ++i) out.push_back(puf::PufInstance::Create(rng, params, "bench"));
  return out;
}

std::vector<Word> Challenges(size_t count) {
  Rng rng(8);
  std::vector<Word> out;
  for (size_t i = 0; i < count; ++i) out.push_back(rng.RandomWord(256));
  return out;
}

template <bool kParallel>
void BM_EvaluateMatrix(benchmark::State& state) {
  auto instances = Instances(16);
  auto challenges = Challenges(size_t(state.range(0)));
  for (auto _ : state) {
    auto m = kParallel ? kernels::EvaluateMatrixParallel(instances, challenges)
                       : kernels::EvaluateMatrixSerial(instances, challenges);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * 16 * state.range(0));
}
BENCHMARK(BM_EvaluateMatrix<false>)->Name("EvaluateMatrix/serial")->Arg(100)->Arg(1000);
BENCHMARK(BM_EvaluateMatrix<true>)->Name("EvaluateMatrix/parallel")->Arg(100)->Arg(1000);

template <bool kParallel>
void BM_HammingTotals(benchmark::State& state) {
  auto instances = Instances(16);
  auto challenges = Challenges(size_t(state.range(0)));
  auto matrix = kernels::EvaluateMatrixSerial(instances, challenges);
  for (auto _ : state) {
    auto t = kParallel ? kernels::HammingTotalsParallel(matrix, 16, challenges.size())
                       : kernels::HammingTotalsSerial(matrix, 16, challenges.size());
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_HammingTotals<false>)->Name("HammingTotals/serial")->Arg(1000);
BENCHMARK(BM_HammingTotals<true>)->Name("HammingTotals/parallel")->Arg(1000);

template <bool kParallel>
void BM_HashLeaves(benchmark::State& state) {
  Rng rng(9);
  std::vector<Bytes> leaves;
  for (int64_t i = 0; i < state.range(0); ++i) leaves.push_back(rng.RandomBytes(300));
  for (auto _ : state) {
    auto h = kParallel ? kernels::HashLeavesParallel(leaves, 256)
                       : kernels::HashLeavesSerial(leaves, 256);
    benchmark::DoNotOptimize(h);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HashLeaves<false>)->Name("HashLeaves/serial")->Arg(1 << 12);
BENCHMARK(BM_HashLeaves<true>)->Name("HashLeaves/parallel")->Arg(1 << 12);

template <bool kParallel>
void BM_TamperSweep(benchmark::State& state) {
  auto sim = workflow::Simulation::Bootstrap("root", 2, "bench.example", 4, {});
  Bytes bundle = sim.BundleFor(*sim.first_issue()).Encode();
  auto mutations = harness::RandomBitFlips(bundle.size(), size_t(state.range(0)), 3);
  for (auto _ : state) {
    auto out = kParallel ? harness::TamperSweepParallel(bundle, mutations, sim.trust_store(),
                                                        sim.Now(), sim.crl())
                         : harness::TamperSweepSerial(bundle, mutations, sim.trust_store(),
                                                      sim.Now(), sim.crl());
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TamperSweep<false>)->Name("TamperSweep/serial")->Arg(500);
BENCHMARK(BM_TamperSweep<true>)->Name("TamperSweep/parallel")->Arg(500);

}  // namespace

BENCHMARK_MAIN();
