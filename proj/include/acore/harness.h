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

#ifndef ACORE_HARNESS_H_
#define ACORE_HARNESS_H_

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "acore/bytes.h"
#include "acore/workflow.h"

namespace acore::harness {

struct Summary {
  double mean = 0;
  double median = 0;
  double p95 = 0;
  size_t count = 0;

  static Summary Of(std::vector<double> samples);
};

struct Interval {
  double low = 0;
  double high = 0;
};

// 95% Wilson score interval by default.
Interval WilsonInterval(size_t successes, size_t trials, double z = 1.959963984540054);

// Pearson chi-square against the uniform distribution over counts.size()
// cells; returns the upper-tail p-value.
double ChiSquareUniformPValue(std::span<const uint64_t> counts);

struct BenchConfig {
  size_t M = 2;
  size_t m = 4;
  size_t n = 256;
  double puf_latency_ms = 3.0;
  size_t trials = 100;
  uint64_t seed = 1;

  void Validate() const;
};

struct BenchReport {
  BenchConfig config;
  Summary issue_ms;   // one domain issuance: validation, PUF, PIV, append
  Summary sign_ms;    // PUF invocation and signature inside it
  Summary log_ms;     // the log append inside it
  Summary verify_chain_ms;  // signature and tag chain only
  Summary verify_ms;        // full bundle verification
  uint64_t chain_puf_evaluations = 0;  // signing evaluations to build one chain
  double chain_puf_latency_ms = 0;
  uint64_t issue_puf_evaluations = 0;  // signing evaluations over all trials
  size_t bundle_bytes = 0;
  size_t piv_chain_bytes = 0;
  size_t invalid_verdicts = 0;

  std::string ToText() const;
  std::string ToCsv() const;
};

BenchReport BenchPipeline(const BenchConfig& config);

enum class Strategy : uint8_t { kRandomSig = 0, kSplice = 1, kStrippedReplay = 2 };
inline constexpr size_t kStrategyCount = 3;
std::string_view StrategyName(Strategy s);

struct AdversaryConfig {
  size_t n = 16;
  size_t q = 8;
  size_t l = 2;  // certificates per chain, root and domain included
  size_t trials = 100000;
  uint64_t seed = 1;

  // Toy n is 8 or 16; n = 256 is allowed for the smoke run. l >= 2, q >= 1.
  void Validate() const;
  // 4 (q l)^2 / 2^n
  double Bound() const;
};

struct StrategyOutcome {
  size_t trials = 0;
  size_t successes = 0;
  // Forgeries that pass the signature and tag chain when the log proofs are
  // not consulted.
  size_t chain_only_successes = 0;
};

struct ForgeryReport {
  AdversaryConfig config;
  size_t trials = 0;
  size_t successes = 0;
  double rate = 0;
  Interval ci;
  double bound = 0;
  std::array<StrategyOutcome, kStrategyCount> by_strategy{};

  std::string ToText() const;
  std::string ToCsv() const;
};

ForgeryReport ForgeryExperiment(const AdversaryConfig& config, bool parallel = true);

// One corruption: data[position] ^= mask, mask != 0.
struct Mutation {
  size_t position = 0;
  uint8_t mask = 0;
};

std::vector<Mutation> ExhaustiveByteMutations(size_t size, uint64_t seed);
std::vector<Mutation> RandomBitFlips(size_t size, size_t count, uint64_t seed);

// Outcome per mutation: -1 when the verdict stayed valid, otherwise the
// failing check's enumerator value.
using TamperOutcomes = std::vector<int8_t>;

TamperOutcomes TamperSweepSerial(ByteView bundle, std::span<const Mutation> mutations,
                                 const workflow::TrustStore& store, uint64_t now,
                                 const workflow::RevocationList& crl);
TamperOutcomes TamperSweepParallel(ByteView bundle, std::span<const Mutation> mutations,
                                   const workflow::TrustStore& store, uint64_t now,
                                   const workflow::RevocationList& crl);

struct TamperSummary {
  size_t total = 0;
  size_t invalid = 0;
  std::map<std::string, size_t> by_check;
};

TamperSummary Summarize(const TamperOutcomes& outcomes);

struct CompletenessResult {
  size_t runs = 0;
  size_t valid = 0;
  std::string first_failure;
};

// |runs| independent bootstrap + domain issuance + encode/decode + verify
// rounds, each with its own derived seed.
CompletenessResult RunCompleteness(size_t M, size_t m, size_t runs, uint64_t seed,
                                   size_t n_bits = 256, bool parallel = true);

struct RotationResult {
  std::vector<uint64_t> counts;
  double p_value = 0;
};

RotationResult RotationUniformity(size_t m, size_t draws, uint64_t seed);

}  // namespace acore::harness

#endif  // ACORE_HARNESS_H_
