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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "acore/crypto.h"
#include "acore/puf.h"
#include "test_util.h"

namespace acore::puf {
namespace {

PufParams Params(size_t n = 256, double noise = 0) {
  PufParams p;
  p.n_bits = n;
  p.noise_rate = noise;
  return p;
}

TEST(PufParams, Validation) {
  EXPECT_NO_THROW(Params().Validate());
  EXPECT_ACORE_ERROR(Params(0).Validate(), ErrorCode::kInvalidArgument);
  EXPECT_ACORE_ERROR(Params(12).Validate(), ErrorCode::kInvalidArgument);
  EXPECT_ACORE_ERROR(Params(256, 0.5).Validate(), ErrorCode::kInvalidArgument);
  PufParams p;
  p.latency_ms = -1;
  EXPECT_ACORE_ERROR(p.Validate(), ErrorCode::kInvalidArgument);
}

TEST(PufInstance, ResponseIsKeyedHashOfChallenge) {
  Seed seed{};
  seed[0] = 1;
  PufInstance p("p0", seed, Params(), "m");
  Word c = Word::FromBytes(Bytes(32, 0xab));
  Bytes input(seed.begin(), seed.end());
  input.insert(input.end(), 32, 0xab);
  EXPECT_EQ(p.Evaluate(c), Word::FromBytes(Sha256(input)));
}

TEST(PufInstance, Deterministic) {
  Rng rng(1);
  PufInstance p = PufInstance::Create(rng, Params(), "m");
  for (int i = 0; i < 100; ++i) {
    Word c = rng.RandomWord(256);
    EXPECT_EQ(p.Evaluate(c), p.Evaluate(c));
  }
}

TEST(PufInstance, DistinctInstancesDifferInHalfTheBits) {
  Rng rng(2);
  PufInstance a = PufInstance::Create(rng, Params(), "m");
  PufInstance b = PufInstance::Create(rng, Params(), "m");
  constexpr size_t kChallenges = 10000;
  uint64_t total = 0;
  for (size_t i = 0; i < kChallenges; ++i) {
    Word c = rng.RandomWord(256);
    total += HammingDistance(a.Evaluate(c), b.Evaluate(c));
  }
  const double mean = double(total) / kChallenges;
  // sigma of the mean is 8 / sqrt(10^4) = 0.08
  EXPECT_NEAR(mean, 128.0, 0.5);
}

TEST(PufInstance, NoiseIsCorrected) {
  Rng rng(3);
  PufInstance noisy = PufInstance::Create(rng, Params(256, 0.05), "m");
  PufInstance clean("clean", noisy.seed(), Params(), "m");
  Word c = rng.RandomWord(256);
  const Word expected = clean.Evaluate(c);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(noisy.Evaluate(c), expected);

  Rng noise(4);
  size_t raw_differs = 0;
  for (int i = 0; i < 100; ++i) raw_differs += noisy.RawSample(c, noise) != expected;
  EXPECT_GT(raw_differs, 90u);
}

TEST(PufInstance, HeavyNoiseExceedsCapacity) {
  Rng rng(5);
  PufInstance p = PufInstance::Create(rng, Params(256, 0.45), "m");
  EXPECT_ACORE_ERROR(p.Evaluate(rng.RandomWord(256)), ErrorCode::kEccFailure);
}

TEST(PufInstance, Unavailable) {
  Rng rng(6);
  PufInstance p = PufInstance::Create(rng, Params(), "m");
  Word c = rng.RandomWord(256);
  EXPECT_ACORE_ERROR(p.Evaluate(Word(128)), ErrorCode::kInvalidArgument);
  p.set_status(InstanceStatus::kFailed);
  EXPECT_ACORE_ERROR(p.Evaluate(c), ErrorCode::kInstanceUnavailable);
  p.set_status(InstanceStatus::kRetired);
  EXPECT_ACORE_ERROR(p.Evaluate(c), ErrorCode::kInstanceUnavailable);
  p.set_status(InstanceStatus::kActive);
  p.ForgetSeed();
  EXPECT_ACORE_ERROR(p.Evaluate(c), ErrorCode::kInstanceUnavailable);
}

TEST(PufInstance, ExpandsBeyond256Bits) {
  Rng rng(7);
  PufInstance p = PufInstance::Create(rng, Params(512), "m");
  Word r = p.Evaluate(rng.RandomWord(512));
  EXPECT_EQ(r.bits(), 512u);
}

TEST(PufGroup, SingletonProofIsIdentityResponse) {
  Rng rng(8);
  PufGroup g = PufGroup::Create("ca", 1, Params(), rng);
  EXPECT_EQ(g.IdentityResponse(g.instances()[0]), g.group_proof());
}

TEST(PufGroup, ComplementIdentity) {
  Rng rng(9);
  PufGroup g = PufGroup::Create("ca", 8, Params(), rng);
  for (const PufInstance& p : g.instances()) {
    Word rp = g.IdentityResponse(p);
    Word complement = g.group_proof() ^ rp;
    EXPECT_EQ(rp ^ complement, g.group_proof());
    EXPECT_EQ(g.EnrolledIdentityResponse(p.id()), rp);
  }
}

TEST(PufGroup, ForeignInstanceIsNotAMember) {
  Rng rng(10);
  PufGroup g = PufGroup::Create("ca", 2, Params(), rng);
  PufInstance stranger = PufInstance::Create(rng, Params(), "m");
  EXPECT_ACORE_ERROR(g.IdentityResponse(stranger), ErrorCode::kNotAMember);
  PufInstance impostor(g.instances()[0].id(), stranger.seed(), Params(), "m");
  EXPECT_ACORE_ERROR(g.IdentityResponse(impostor), ErrorCode::kNotAMember);
}

TEST(PufGroup, NoIdentityResponseCollisions) {
  Rng rng(11);
  std::set<Word> seen;
  for (int i = 0; i < 1000; ++i) {
    PufGroup g = PufGroup::Create("ca", 2, Params(), rng);
    Word a = g.IdentityResponse(g.instances()[0]);
    Word b = g.IdentityResponse(g.instances()[1]);
    EXPECT_NE(a, b);
    seen.insert(a);
    seen.insert(b);
  }
  EXPECT_EQ(seen.size(), 2000u);
}

TEST(PufGroup, ClonesCancel) {
  Rng rng(12);
  PufGroup g = PufGroup::Create("ca", 2, Params(), rng);
  const Word before = g.group_proof();
  PufInstance original = PufInstance::Create(rng, Params(), "m");
  PufInstance clone("clone", original.seed(), Params(), "m");
  g.AddInstance(original);
  g.AddInstance(clone);
  EXPECT_EQ(g.group_proof(), before);
  EXPECT_EQ(g.ComputeGroupProof(), before);
}

TEST(PufGroup, IncrementalMatchesRecompute) {
  Rng rng(13);
  PufGroup g = PufGroup::Create("ca", 8, Params(), rng);
  const Word incremental = g.group_proof();
  Word direct(256);
  for (const PufInstance& p : g.instances()) direct ^= p.Evaluate(g.identity_challenge());
  EXPECT_EQ(incremental, direct);
  EXPECT_EQ(g.ComputeGroupProof(), incremental);
}

TEST(PufGroup, AddRemoveAlgebra) {
  Rng rng(14);
  PufGroup g = PufGroup::Create("ca", 3, Params(), rng);
  const Word before = g.group_proof();
  PufInstance extra = PufInstance::Create(rng, Params(), "m");
  std::string id = extra.id();
  g.AddInstance(extra);
  EXPECT_NE(g.group_proof(), before);
  g.RemoveInstance(id);
  EXPECT_EQ(g.group_proof(), before);
  EXPECT_EQ(g.Get(id).status(), InstanceStatus::kRetired);

  for (int i = 0; i < 3; ++i) g.AddInstance(PufInstance::Create(rng, Params(), "m"));
  g.RemoveInstance(g.instances()[1].id());
  Word incremental = g.group_proof();
  EXPECT_EQ(g.ComputeGroupProof(), incremental);

  EXPECT_ACORE_ERROR(g.AddInstance(g.instances()[0]), ErrorCode::kDuplicateMember);
  EXPECT_ACORE_ERROR(g.RemoveInstance("nope"), ErrorCode::kUnknownMember);
  EXPECT_ACORE_ERROR(g.RemoveInstance(id), ErrorCode::kUnknownMember);
}

TEST(PufGroup, RemovingLastInstanceEmptiesGroup) {
  Rng rng(15);
  PufGroup g = PufGroup::Create("ca", 1, Params(), rng);
  g.RemoveInstance(g.instances()[0].id(), InstanceStatus::kFailed);
  EXPECT_TRUE(g.group_proof().IsZero());
  EXPECT_ACORE_ERROR(g.ComputeGroupProof(), ErrorCode::kEmptyGroup);
  EXPECT_ACORE_ERROR(g.SelectInstance(), ErrorCode::kGroupExhausted);
  EXPECT_ACORE_ERROR(PufGroup::Create("x", 0, Params(), rng), ErrorCode::kEmptyGroup);
}

TEST(PufGroup, Selection) {
  Rng rng(16);
  PufGroup one = PufGroup::Create("ca", 1, Params(), rng);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(one.SelectInstance().id(), one.instances()[0].id());

  PufGroup g = PufGroup::Create("ca", 4, Params(), rng);
  g.RemoveInstance(g.instances()[2].id(), InstanceStatus::kFailed);
  for (int i = 0; i < 200; ++i) EXPECT_TRUE(g.SelectInstance().active());
  EXPECT_EQ(g.selection_counts().size(), 3u);
  EXPECT_EQ(g.rotation_draws(), 200u);

  for (const auto& p : std::vector<PufInstance>(g.instances()))
    if (p.active()) g.RemoveInstance(p.id(), InstanceStatus::kFailed);
  EXPECT_ACORE_ERROR(g.SelectInstance(), ErrorCode::kGroupExhausted);
}

TEST(PufGroup, SelectionIsReproducible) {
  Rng a(17), b(17);
  PufGroup ga = PufGroup::Create("ca", 8, Params(), a);
  PufGroup gb = PufGroup::Create("ca", 8, Params(), b);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(ga.SelectInstance().id(), gb.SelectInstance().id());
}

TEST(PufGroup, SerializeRoundTrip) {
  Rng rng(18);
  PufGroup g = PufGroup::Create("ca", 4, Params(), rng);
  g.RemoveInstance(g.instances()[1].id(), InstanceStatus::kFailed);
  for (int i = 0; i < 5; ++i) g.SelectInstance();
  Bytes file = g.Serialize();
  PufGroup back = PufGroup::Deserialize(file);
  EXPECT_EQ(back.Serialize(), file);
  EXPECT_EQ(back.group_proof(), g.group_proof());
  EXPECT_EQ(back.rotation_draws(), 5u);
  EXPECT_EQ(back.SelectInstance().id(), g.SelectInstance().id());
  for (const PufInstance& p : g.instances()) {
    EXPECT_EQ(back.Get(p.id()).status(), p.status());
    EXPECT_EQ(back.Get(p.id()).seed(), p.seed());
  }
}

TEST(PufGroup, ForgottenSeedsKeepEnrollment) {
  Rng rng(19);
  PufGroup g = PufGroup::Create("ca", 3, Params(), rng);
  const Word pi = g.group_proof();
  std::string id = g.instances()[0].id();
  Word rp = g.EnrolledIdentityResponse(id);
  g.ForgetSeeds();
  for (const PufInstance& p : g.instances()) EXPECT_FALSE(p.has_seed());
  EXPECT_EQ(g.EnrolledIdentityResponse(id), rp);
  g.RemoveInstance(id, InstanceStatus::kFailed);
  EXPECT_EQ(g.group_proof(), pi ^ rp);
  EXPECT_ACORE_ERROR(g.IdentityResponse(g.instances()[1]), ErrorCode::kInstanceUnavailable);
  Bytes file = g.Serialize();
  for (const PufInstance& p : PufGroup::Deserialize(file).instances()) EXPECT_FALSE(p.has_seed());
}

TEST(PufStats, SuiteAtDefaultWidth) {
  PufStatsReport r = RunStatSuite(Params(), 16, 1000, 42);
  EXPECT_EQ(r.n_bits, 256u);
  EXPECT_EQ(r.bit_bias.size(), 256u);
  EXPECT_EQ(r.sample_count, 16000u);
  EXPECT_NEAR(r.mean_inter_hd, 128.0, 6.0);
  EXPECT_NEAR(r.mean_intra_hd, 128.0, 6.0);
  EXPECT_LE(r.MaxBiasDeviation(), 0.05);
  // sigma_mean = (sqrt(n) / 2) / sqrt(samples)
  const double sigma_inter = 8.0 / std::sqrt(120.0 * 1000);
  EXPECT_NEAR(r.mean_inter_hd, 128.0, 6 * sigma_inter);
}

TEST(PufStats, SerialAndParallelAgree) {
  PufStatsReport a = RunStatSuite(Params(64), 5, 200, 9, false);
  PufStatsReport b = RunStatSuite(Params(64), 5, 200, 9, true);
  EXPECT_EQ(a.bit_bias, b.bit_bias);
  EXPECT_EQ(a.mean_inter_hd, b.mean_inter_hd);
  EXPECT_EQ(a.mean_intra_hd, b.mean_intra_hd);
}

TEST(PufStats, Preconditions) {
  EXPECT_ACORE_ERROR(RunStatSuite(Params(), 1, 10, 1), ErrorCode::kInvalidArgument);
  EXPECT_ACORE_ERROR(RunStatSuite(Params(), 2, 0, 1), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace acore::puf
