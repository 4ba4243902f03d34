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

#include "acore/puf.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include "acore/error.h"
#include "acore/kernels.h"
#include "acore/wire.h"

namespace acore::puf {

namespace {

constexpr std::string_view kGroupMagic = "ACPG";

Rng& NoiseSource() {
  thread_local Rng rng(EntropySeed());
  return rng;
}

}  // namespace

void PufParams::Validate() const {
  if (n_bits == 0 || n_bits % 8 != 0)
    throw Error(ErrorCode::kInvalidArgument, "n must be a positive multiple of 8");
  if (!(noise_rate >= 0.0 && noise_rate < 0.5))
    throw Error(ErrorCode::kInvalidArgument, "noise_rate must lie in [0, 0.5)");
  if (!(latency_ms >= 0.0))
    throw Error(ErrorCode::kInvalidArgument, "latency_ms must be non-negative");
}

std::string_view StatusName(InstanceStatus status) {
  switch (status) {
    case InstanceStatus::kActive: return "active";
    case InstanceStatus::kFailed: return "failed";
    case InstanceStatus::kRetired: return "retired";
  }
  return "unknown";
}

PufInstance::PufInstance(std::string id, std::optional<Seed> seed, PufParams params,
                         std::string manufacturer, InstanceStatus status)
    : id_(std::move(id)),
      seed_(seed),
      params_(params),
      manufacturer_(std::move(manufacturer)),
      status_(status) {
  params_.Validate();
  if (id_.empty()) throw Error(ErrorCode::kInvalidArgument, "empty instance id");
}

PufInstance PufInstance::Create(Rng& rng, const PufParams& params,
                                std::string manufacturer) {
  Seed seed;
  Bytes raw = rng.RandomBytes(seed.size());
  std::copy(raw.begin(), raw.end(), seed.begin());
  std::string id = "puf-" + ToHex(rng.RandomBytes(8));
  return PufInstance(std::move(id), seed, params, std::move(manufacturer));
}

void PufInstance::RequireUsable(const Word& challenge) const {
  if (!active())
    throw Error(ErrorCode::kInstanceUnavailable,
                "instance " + id_ + " is " + std::string(StatusName(status_)));
  if (!seed_)
    throw Error(ErrorCode::kInstanceUnavailable, "instance " + id_ + " has no entropy source");
  if (challenge.bits() != params_.n_bits)
    throw Error(ErrorCode::kInvalidArgument,
                "challenge is " + std::to_string(challenge.bits()) + " bits, expected " +
                    std::to_string(params_.n_bits));
}

Word PufInstance::Ideal(const Word& challenge) const {
  return HashBits(params_.n_bits, ByteView(*seed_), challenge);
}

Word PufInstance::RawSample(const Word& challenge, Rng& noise) const {
  RequireUsable(challenge);
  Word raw = Ideal(challenge);
  if (params_.noise_rate > 0) {
    for (size_t i = 0; i < raw.bits(); ++i)
      if (noise.UniformReal() < params_.noise_rate) raw.FlipBit(i);
  }
  return raw;
}

Word PufInstance::Evaluate(const Word& challenge) const {
  RequireUsable(challenge);
  if (params_.simulate_latency && params_.latency_ms > 0)
    std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(params_.latency_ms));
  Word ideal = Ideal(challenge);
  if (params_.noise_rate == 0) return ideal;

  std::vector<Word> samples;
  samples.reserve(kEccSamples);
  for (int s = 0; s < kEccSamples; ++s) samples.push_back(RawSample(challenge, NoiseSource()));
  Word voted(params_.n_bits);
  for (size_t i = 0; i < voted.bits(); ++i) {
    int ones = 0;
    for (const Word& s : samples) ones += s.Bit(i);
    if (ones * 2 > kEccSamples) voted.FlipBit(i);
  }
  // The code word is the enrolled (noise-free) response; correction succeeds
  // when the residual error after voting is within capacity.
  if (HammingDistance(voted, ideal) > EccCapacity(params_.n_bits))
    throw Error(ErrorCode::kEccFailure, "residual noise exceeds correction capacity");
  return ideal;
}

PufGroup::PufGroup(std::string ca_name, PufParams params, Word identity_challenge,
                   uint64_t rotation_seed)
    : ca_name_(std::move(ca_name)),
      params_(params),
      identity_challenge_(std::move(identity_challenge)),
      group_proof_(params.n_bits),
      rotation_seed_(rotation_seed) {
  params_.Validate();
  if (identity_challenge_.bits() != params_.n_bits)
    throw Error(ErrorCode::kInvalidArgument, "identity challenge length differs from n");
}

PufGroup PufGroup::Create(std::string ca_name, size_t m, const PufParams& params, Rng& rng,
                          std::string manufacturer) {
  if (m == 0) throw Error(ErrorCode::kEmptyGroup, "a group needs at least one instance");
  Word challenge = rng.RandomWord(params.n_bits);
  PufGroup group(std::move(ca_name), params, std::move(challenge), rng());
  for (size_t i = 0; i < m; ++i)
    group.AddInstance(PufInstance::Create(rng, params, manufacturer));
  return group;
}

size_t PufGroup::active_count() const {
  return size_t(std::count_if(instances_.begin(), instances_.end(),
                              [](const PufInstance& p) { return p.active(); }));
}

const PufInstance* PufGroup::Find(std::string_view id) const {
  for (const PufInstance& p : instances_)
    if (p.id() == id) return &p;
  return nullptr;
}

const PufInstance& PufGroup::Get(std::string_view id) const {
  const PufInstance* p = Find(id);
  if (!p) throw Error(ErrorCode::kNotAMember, std::string(id) + " is not in group " + ca_name_);
  return *p;
}

Word PufGroup::IdentityResponse(const PufInstance& instance) const {
  const PufInstance* member = Find(instance.id());
  if (!member || member->seed() != instance.seed())
    throw Error(ErrorCode::kNotAMember, instance.id() + " is not in group " + ca_name_);
  return member->Evaluate(identity_challenge_);
}

const Word& PufGroup::EnrolledIdentityResponse(std::string_view id) const {
  auto it = enrolled_rp_.find(id);
  if (it == enrolled_rp_.end())
    throw Error(ErrorCode::kNotAMember, std::string(id) + " has no enrolled identity response");
  return it->second;
}

const Word& PufGroup::ComputeGroupProof() {
  Word proof(params_.n_bits);
  size_t active = 0;
  for (const PufInstance& p : instances_) {
    if (!p.active()) continue;
    proof ^= p.Evaluate(identity_challenge_);
    ++active;
  }
  if (active == 0) throw Error(ErrorCode::kEmptyGroup, "group " + ca_name_ + " has no active instance");
  group_proof_ = std::move(proof);
  return group_proof_;
}

const Word& PufGroup::AddInstance(PufInstance instance) {
  if (Find(instance.id()))
    throw Error(ErrorCode::kDuplicateMember, instance.id() + " already in group " + ca_name_);
  if (instance.params().n_bits != params_.n_bits)
    throw Error(ErrorCode::kInvalidArgument, "instance n differs from group n");
  instance.set_status(InstanceStatus::kActive);
  Word rp = instance.Evaluate(identity_challenge_);
  group_proof_ ^= rp;
  enrolled_rp_.insert_or_assign(instance.id(), std::move(rp));
  instances_.push_back(std::move(instance));
  return group_proof_;
}

const Word& PufGroup::RemoveInstance(std::string_view id, InstanceStatus final_status) {
  auto it = std::find_if(instances_.begin(), instances_.end(),
                         [&](const PufInstance& p) { return p.id() == id; });
  if (it == instances_.end() || !it->active())
    throw Error(ErrorCode::kUnknownMember, std::string(id) + " is not an active member of " + ca_name_);
  group_proof_ ^= EnrolledIdentityResponse(id);
  it->set_status(final_status == InstanceStatus::kActive ? InstanceStatus::kRetired : final_status);
  return group_proof_;
}

const PufInstance& PufGroup::SelectInstance() {
  std::vector<const PufInstance*> active;
  for (const PufInstance& p : instances_)
    if (p.active()) active.push_back(&p);
  if (active.empty())
    throw Error(ErrorCode::kGroupExhausted, "no active instance in group " + ca_name_);
  const uint64_t bound = active.size();
  const uint64_t limit = ~uint64_t{0} - ~uint64_t{0} % bound;
  const uint64_t draw_seed = Rng::Derive(rotation_seed_, rotation_draws_++);
  uint64_t v = draw_seed;
  for (uint64_t attempt = 1; v >= limit; ++attempt) v = Rng::Derive(draw_seed, attempt);
  const PufInstance& chosen = *active[v % bound];
  ++selection_counts_[chosen.id()];
  return chosen;
}

void PufGroup::ForgetSeeds() {
  for (PufInstance& p : instances_) p.ForgetSeed();
}

Bytes PufGroup::Serialize() const {
  std::vector<Bytes> items;
  for (const PufInstance& p : instances_) {
    wire::Writer w;
    w.AddName(wire::tag::kInstanceId, p.id());
    if (p.seed()) w.Add(wire::tag::kInstanceSeed, *p.seed());
    w.AddName(wire::tag::kInstanceManufacturer, p.manufacturer());
    w.AddU8(wire::tag::kInstanceStatus, uint8_t(p.status()));
    w.AddWord(wire::tag::kInstanceIdentityResponse, EnrolledIdentityResponse(p.id()));
    items.push_back(std::move(w).bytes());
  }
  wire::Writer w;
  w.AddName(wire::tag::kGroupCaName, ca_name_)
      .AddWord(wire::tag::kGroupIdentityChallenge, identity_challenge_)
      .AddU64(wire::tag::kGroupRotationSeed, rotation_seed_)
      .AddU64(wire::tag::kGroupBits, params_.n_bits)
      .AddSequence(wire::tag::kGroupInstances, items)
      .AddWord(wire::tag::kGroupProof, group_proof_)
      .AddU64(wire::tag::kGroupRotationDraws, rotation_draws_);
  return wire::WrapFile(kGroupMagic, w.bytes());
}

PufGroup PufGroup::Deserialize(ByteView file, const PufParams& runtime_params) {
  wire::Reader r(wire::UnwrapFile(kGroupMagic, file));
  std::string name = r.RequireName(wire::tag::kGroupCaName);
  Word challenge = r.RequireWord(wire::tag::kGroupIdentityChallenge);
  uint64_t rotation_seed = r.RequireU64(wire::tag::kGroupRotationSeed);
  PufParams params = runtime_params;
  params.n_bits = r.RequireU64(wire::tag::kGroupBits);
  auto items = r.RequireSequence(wire::tag::kGroupInstances);
  Word proof = r.RequireWord(wire::tag::kGroupProof);
  uint64_t draws = r.RequireU64(wire::tag::kGroupRotationDraws);
  r.Finish();

  PufGroup group(std::move(name), params, std::move(challenge), rotation_seed);
  for (ByteView item : items) {
    wire::Reader ir(item);
    std::string id = ir.RequireName(wire::tag::kInstanceId);
    std::optional<Seed> seed;
    if (auto s = ir.Optional(wire::tag::kInstanceSeed)) {
      if (s->size() != Seed().size()) throw Error(ErrorCode::kMalformed, "seed must be 32 bytes");
      seed.emplace();
      std::copy(s->begin(), s->end(), seed->begin());
    }
    std::string manufacturer = ir.RequireName(wire::tag::kInstanceManufacturer);
    uint8_t status = ir.RequireU8(wire::tag::kInstanceStatus);
    Word rp = ir.RequireWord(wire::tag::kInstanceIdentityResponse);
    ir.Finish();
    if (status > uint8_t(InstanceStatus::kRetired))
      throw Error(ErrorCode::kMalformed, "unknown instance status");
    if (group.Find(id)) throw Error(ErrorCode::kMalformed, "duplicate instance id " + id);
    group.enrolled_rp_.insert_or_assign(id, std::move(rp));
    group.instances_.emplace_back(std::move(id), seed, params, std::move(manufacturer),
                                  InstanceStatus(status));
  }
  if (proof.bits() != params.n_bits) throw Error(ErrorCode::kMalformed, "group proof length");
  group.group_proof_ = std::move(proof);
  group.rotation_draws_ = draws;
  return group;
}

double PufStatsReport::MaxBiasDeviation() const {
  double worst = 0;
  for (double b : bit_bias) worst = std::max(worst, std::abs(b - 0.5));
  return worst;
}

PufStatsReport RunStatSuite(const PufParams& params, size_t num_instances,
                            size_t num_challenges, uint64_t seed, bool parallel) {
  if (num_instances < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 instances");
  if (num_challenges < 1) throw Error(ErrorCode::kInvalidArgument, "need at least 1 challenge");
  params.Validate();
  Rng rng(seed);
  std::vector<PufInstance> instances;
  for (size_t i = 0; i < num_instances; ++i)
    instances.push_back(PufInstance::Create(rng, params, "acore-sim"));
  std::vector<Word> challenges;
  for (size_t j = 0; j < num_challenges; ++j) challenges.push_back(rng.RandomWord(params.n_bits));

  auto matrix = parallel ? kernels::EvaluateMatrixParallel(instances, challenges)
                         : kernels::EvaluateMatrixSerial(instances, challenges);
  auto totals = parallel
                    ? kernels::HammingTotalsParallel(matrix, num_instances, num_challenges)
                    : kernels::HammingTotalsSerial(matrix, num_instances, num_challenges);

  PufStatsReport report;
  report.n_bits = params.n_bits;
  report.sample_count = totals.samples;
  report.mean_inter_hd = double(totals.inter_sum) / double(totals.inter_pairs);
  report.mean_intra_hd =
      totals.intra_pairs ? double(totals.intra_sum) / double(totals.intra_pairs) : 0.0;
  for (uint64_t ones : totals.ones) report.bit_bias.push_back(double(ones) / double(totals.samples));
  return report;
}

}  // namespace acore::puf
