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

#ifndef ACORE_KERNELS_H_
#define ACORE_KERNELS_H_

// Data-parallel inner loops. Every kernel has a serial reference that the
// tests hold the OpenMP version to, result for result.

#include <cstdint>
#include <exception>
#include <span>
#include <vector>

#include "acore/bytes.h"
#include "acore/crypto.h"
#include "acore/puf.h"

namespace acore::kernels {

struct HammingTotals {
  uint64_t inter_sum = 0;
  uint64_t inter_pairs = 0;
  uint64_t intra_sum = 0;
  uint64_t intra_pairs = 0;
  uint64_t samples = 0;
  std::vector<uint64_t> ones;  // per bit position

  friend bool operator==(const HammingTotals&, const HammingTotals&) = default;
};

// Row-major: result[i * challenges.size() + j] = instances[i](challenges[j]).
std::vector<Word> EvaluateMatrixSerial(std::span<const puf::PufInstance> instances,
                                       std::span<const Word> challenges);
std::vector<Word> EvaluateMatrixParallel(std::span<const puf::PufInstance> instances,
                                         std::span<const Word> challenges);

// Inter: every instance pair on each challenge. Intra: each instance on
// consecutive challenges j, j+1.
HammingTotals HammingTotalsSerial(std::span<const Word> matrix, size_t instances,
                                  size_t challenges);
HammingTotals HammingTotalsParallel(std::span<const Word> matrix, size_t instances,
                                    size_t challenges);

// Merkle leaf hashes H(0x00 || leaf).
std::vector<Word> HashLeavesSerial(std::span<const Bytes> leaves, size_t bits);
std::vector<Word> HashLeavesParallel(std::span<const Bytes> leaves, size_t bits);

// result[i] = fn(i, Rng::Derive(seed, i)); each trial owns its state, so the
// output does not depend on scheduling.
template <typename Result, typename Fn>
std::vector<Result> RunTrialsSerial(size_t count, uint64_t seed, Fn&& fn) {
  std::vector<Result> results(count);
  for (size_t i = 0; i < count; ++i) results[i] = fn(i, Rng::Derive(seed, i));
  return results;
}

template <typename Result, typename Fn>
std::vector<Result> RunTrialsParallel(size_t count, uint64_t seed, Fn&& fn) {
  std::vector<Result> results(count);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < static_cast<long long>(count); ++i) {
    try {
      results[size_t(i)] = fn(size_t(i), Rng::Derive(seed, uint64_t(i)));
    } catch (...) {
#pragma omp critical(acore_trial_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

int MaxThreads();

}  // namespace acore::kernels

#endif  // ACORE_KERNELS_H_
