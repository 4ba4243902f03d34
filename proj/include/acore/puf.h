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

#ifndef ACORE_PUF_H_
#define ACORE_PUF_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acore/bytes.h"
#include "acore/crypto.h"

namespace acore::puf {

struct PufParams {
  size_t n_bits = 256;
  double latency_ms = 3.0;
  // Pre-ECC bit flip probability per raw readout.
  double noise_rate = 0.0;
  // Latency is only slept when this is set; benchmarks turn it on.
  bool simulate_latency = false;

  // Throws Error(kInvalidArgument) when an invariant does not hold.
  void Validate() const;
};

enum class InstanceStatus : uint8_t { kActive = 0, kFailed = 1, kRetired = 2 };

std::string_view StatusName(InstanceStatus status);

using Seed = std::array<uint8_t, 32>;

// Number of raw readouts combined by the majority vote.
inline constexpr int kEccSamples = 9;

// A simulated PUF: response = H_n(seed || challenge). Raw readouts carry
// i.i.d. bit noise; Evaluate() majority-votes kEccSamples readouts and then
// applies an ideal t-error-correcting code, t = EccCapacity(n).
class PufInstance {
 public:
  PufInstance(std::string id, std::optional<Seed> seed, PufParams params,
              std::string manufacturer,
              InstanceStatus status = InstanceStatus::kActive);

  static PufInstance Create(Rng& rng, const PufParams& params,
                            std::string manufacturer);

  const std::string& id() const { return id_; }
  const PufParams& params() const { return params_; }
  const std::string& manufacturer() const { return manufacturer_; }
  InstanceStatus status() const { return status_; }
  bool active() const { return status_ == InstanceStatus::kActive; }
  void set_status(InstanceStatus status) { status_ = status; }

  // Secret; never part of a public artifact.
  const std::optional<Seed>& seed() const { return seed_; }
  bool has_seed() const { return seed_.has_value(); }
  void ForgetSeed() { seed_.reset(); }

  // Throws kInstanceUnavailable (inactive or seedless), kInvalidArgument
  // (challenge length), kEccFailure (noise beyond correction capacity).
  Word Evaluate(const Word& challenge) const;

  // One noisy readout before correction, noise drawn from |noise|.
  Word RawSample(const Word& challenge, Rng& noise) const;

  static size_t EccCapacity(size_t n_bits) { return n_bits / 16 > 0 ? n_bits / 16 : 1; }

 private:
  Word Ideal(const Word& challenge) const;
  void RequireUsable(const Word& challenge) const;

  std::string id_;
  std::optional<Seed> seed_;
  PufParams params_;
  std::string manufacturer_;
  InstanceStatus status_;
};

// A CA's group of PUF instances with its identity challenge C_CA and the
// XOR-accumulated group proof pi_CA.
//
// Mutation is single-writer; Evaluate/IdentityResponse on a const group are
// safe from any number of threads.
class PufGroup {
 public:
  PufGroup(std::string ca_name, PufParams params, Word identity_challenge,
           uint64_t rotation_seed);

  // Fresh group of |m| instances with random C_CA and rotation seed.
  static PufGroup Create(std::string ca_name, size_t m, const PufParams& params,
                         Rng& rng, std::string manufacturer = "acore-sim");

  const std::string& ca_name() const { return ca_name_; }
  const PufParams& params() const { return params_; }
  size_t n_bits() const { return params_.n_bits; }
  const Word& identity_challenge() const { return identity_challenge_; }
  const Word& group_proof() const { return group_proof_; }
  uint64_t rotation_seed() const { return rotation_seed_; }
  uint64_t rotation_draws() const { return rotation_draws_; }
  const std::vector<PufInstance>& instances() const { return instances_; }
  size_t active_count() const;

  const PufInstance* Find(std::string_view id) const;
  const PufInstance& Get(std::string_view id) const;

  // evaluate(instance, C_CA). Throws kNotAMember when |instance| is not one of
  // this group's instances.
  Word IdentityResponse(const PufInstance& instance) const;
  // RP recorded when the instance joined; available after seed loss.
  const Word& EnrolledIdentityResponse(std::string_view id) const;

  // Recomputes pi from scratch over active instances and stores it.
  // Throws kEmptyGroup.
  const Word& ComputeGroupProof();

  // Both return the updated pi. Add throws kDuplicateMember; Remove throws
  // kUnknownMember and leaves the instance in the list with |final_status|.
  const Word& AddInstance(PufInstance instance);
  const Word& RemoveInstance(std::string_view id,
                             InstanceStatus final_status = InstanceStatus::kRetired);

  // Uniform draw among active instances. Throws kGroupExhausted.
  const PufInstance& SelectInstance();
  const std::map<std::string, uint64_t>& selection_counts() const {
    return selection_counts_;
  }

  // Drops every instance seed: the CA keeps all other state.
  void ForgetSeeds();

  // Secret group state file ("ACPG").
  Bytes Serialize() const;
  static PufGroup Deserialize(ByteView file, const PufParams& runtime_params = {});

 private:
  std::string ca_name_;
  PufParams params_;
  Word identity_challenge_;
  Word group_proof_;
  uint64_t rotation_seed_;
  uint64_t rotation_draws_ = 0;
  std::vector<PufInstance> instances_;
  std::map<std::string, Word, std::less<>> enrolled_rp_;
  std::map<std::string, uint64_t> selection_counts_;
};

struct PufStatsReport {
  std::vector<double> bit_bias;
  double mean_inter_hd = 0;
  double mean_intra_hd = 0;
  size_t sample_count = 0;
  size_t n_bits = 0;

  double MaxBiasDeviation() const;
};

// Fresh simulated instances evaluated on random challenges.
// num_instances >= 2 and num_challenges >= 1 (else kInvalidArgument).
PufStatsReport RunStatSuite(const PufParams& params, size_t num_instances,
                            size_t num_challenges, uint64_t seed,
                            bool parallel = true);

}  // namespace acore::puf

#endif  // ACORE_PUF_H_
