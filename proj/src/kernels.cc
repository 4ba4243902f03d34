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

#include "acore/kernels.h"

#include <omp.h>

#include <exception>

#include "acore/error.h"

namespace acore::kernels {

namespace {

void CheckMatrix(std::span<const Word> matrix, size_t instances, size_t challenges) {
  if (matrix.size() != instances * challenges || matrix.empty())
    throw Error(ErrorCode::kInvalidArgument, "response matrix shape mismatch");
}

Word LeafHash(const Bytes& leaf, size_t bits) {
  Hasher h(bits);
  h.Update(uint8_t{0x00}).Update(leaf);
  return h.Finish();
}

}  // namespace

std::vector<Word> EvaluateMatrixSerial(std::span<const puf::PufInstance> instances,
                                       std::span<const Word> challenges) {
  std::vector<Word> out(instances.size() * challenges.size());
  for (size_t i = 0; i < instances.size(); ++i)
    for (size_t j = 0; j < challenges.size(); ++j)
      out[i * challenges.size() + j] = instances[i].Evaluate(challenges[j]);
  return out;
}

std::vector<Word> EvaluateMatrixParallel(std::span<const puf::PufInstance> instances,
                                         std::span<const Word> challenges) {
  const size_t cols = challenges.size();
  const long long total = static_cast<long long>(instances.size() * cols);
  std::vector<Word> out(instances.size() * cols);
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < total; ++k) {
    try {
      out[size_t(k)] = instances[size_t(k) / cols].Evaluate(challenges[size_t(k) % cols]);
    } catch (...) {
#pragma omp critical(acore_matrix_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

HammingTotals HammingTotalsSerial(std::span<const Word> matrix, size_t instances,
                                  size_t challenges) {
  CheckMatrix(matrix, instances, challenges);
  const size_t bits = matrix[0].bits();
  HammingTotals t;
  t.ones.assign(bits, 0);
  for (size_t j = 0; j < challenges; ++j) {
    for (size_t a = 0; a < instances; ++a) {
      const Word& ra = matrix[a * challenges + j];
      for (size_t b = a + 1; b < instances; ++b) {
        t.inter_sum += HammingDistance(ra, matrix[b * challenges + j]);
        ++t.inter_pairs;
      }
      if (j + 1 < challenges) {
        t.intra_sum += HammingDistance(ra, matrix[a * challenges + j + 1]);
        ++t.intra_pairs;
      }
      for (size_t k = 0; k < bits; ++k) t.ones[k] += ra.Bit(k);
      ++t.samples;
    }
  }
  return t;
}

HammingTotals HammingTotalsParallel(std::span<const Word> matrix, size_t instances,
                                    size_t challenges) {
  CheckMatrix(matrix, instances, challenges);
  const size_t bits = matrix[0].bits();
  uint64_t inter_sum = 0, inter_pairs = 0, intra_sum = 0, intra_pairs = 0, samples = 0;
  std::vector<uint64_t> ones(bits, 0);
  uint64_t* ones_ptr = ones.data();
#pragma omp parallel for schedule(static) \
    reduction(+ : inter_sum, inter_pairs, intra_sum, intra_pairs, samples) \
    reduction(+ : ones_ptr[:bits])
  for (long long jj = 0; jj < static_cast<long long>(challenges); ++jj) {
    const size_t j = size_t(jj);
    for (size_t a = 0; a < instances; ++a) {
      const Word& ra = matrix[a * challenges + j];
      for (size_t b = a + 1; b < instances; ++b) {
        inter_sum += HammingDistance(ra, matrix[b * challenges + j]);
        ++inter_pairs;
      }
      if (j + 1 < challenges) {
        intra_sum += HammingDistance(ra, matrix[a * challenges + j + 1]);
        ++intra_pairs;
      }
      for (size_t k = 0; k < bits; ++k) ones_ptr[k] += ra.Bit(k);
      ++samples;
    }
  }
  HammingTotals t;
  t.inter_sum = inter_sum;
  t.inter_pairs = inter_pairs;
  t.intra_sum = intra_sum;
  t.intra_pairs = intra_pairs;
  t.samples = samples;
  t.ones = std::move(ones);
  return t;
}

std::vector<Word> HashLeavesSerial(std::span<const Bytes> leaves, size_t bits) {
  std::vector<Word> out;
  out.reserve(leaves.size());
  for (const Bytes& leaf : leaves) out.push_back(LeafHash(leaf, bits));
  return out;
}

std::vector<Word> HashLeavesParallel(std::span<const Bytes> leaves, size_t bits) {
  std::vector<Word> out(leaves.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(leaves.size()); ++i)
    out[size_t(i)] = LeafHash(leaves[size_t(i)], bits);
  return out;
}

int MaxThreads() { return omp_get_max_threads(); }

}  // namespace acore::kernels
