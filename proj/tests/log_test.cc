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

#include <atomic>
#include <thread>

#include "acore/bundle.h"
#include "acore/log.h"
#include "acore/piv.h"
#include "acore/workflow.h"
#include "test_util.h"

namespace acore::pivlog {
namespace {

TransparencyLog MakeLog(uint64_t* now) {
  TransparencyLog log(256, Bytes(32, 0x42), [now] { return ++*now; });
  log.Authorize("ca");
  return log;
}

TEST(Log, UnauthorizedAppendLeavesLogUnchanged) {
  uint64_t now = 0;
  TransparencyLog log = MakeLog(&now);
  log.Append("ca", AsBytes("c0"), AsBytes("p0"));
  SignedHead before = log.Head(TreeKind::kCert);
  EXPECT_ACORE_ERROR(log.Append("mallory", AsBytes("c1"), AsBytes("p1")),
                     ErrorCode::kUnauthorized);
  EXPECT_EQ(log.size(), 1u);
  EXPECT_EQ(log.Head(TreeKind::kCert), before);
}

TEST(Log, AppendThenInclusion) {
  uint64_t now = 0;
  TransparencyLog log = MakeLog(&now);
  for (int i = 0; i < 13; ++i) {
    std::string c = "cert" + std::to_string(i), p = "piv" + std::to_string(i);
    AppendResult r = log.Append("ca", AsBytes(c), AsBytes(p));
    EXPECT_EQ(r.leaf_index, uint64_t(i));
    EXPECT_EQ(r.cert_head, log.Head(TreeKind::kCert));
    EXPECT_TRUE(log.CheckHeadTag(r.cert_head));
    EXPECT_TRUE(log.CheckHeadTag(r.piv_head));
    LogProof cp = log.InclusionProof(TreeKind::kCert, r.leaf_index);
    LogProof pp = log.InclusionProof(TreeKind::kPiv, r.leaf_index);
    EXPECT_TRUE(VerifyInclusionProof(cp, AsBytes(c)));
    EXPECT_TRUE(VerifyInclusionProof(pp, AsBytes(p)));
    EXPECT_FALSE(VerifyInclusionProof(cp, AsBytes(p)));
    EXPECT_EQ(cp.head, r.cert_head);
  }
  EXPECT_EQ(log.record(3).cert, Bytes(AsBytes("cert3").begin(), AsBytes("cert3").end()));
  EXPECT_EQ(log.record(3).submitter, "ca");
  EXPECT_ACORE_ERROR(log.record(13), ErrorCode::kOutOfRange);
  EXPECT_ACORE_ERROR(log.InclusionProof(TreeKind::kCert, 13), ErrorCode::kOutOfRange);
}

TEST(Log, ConsistencyAcrossAppends) {
  uint64_t now = 0;
  TransparencyLog log = MakeLog(&now);
  for (int i = 0; i < 5; ++i) log.Append("ca", AsBytes("c" + std::to_string(i)), AsBytes("p"));
  for (TreeKind tree : {TreeKind::kCert, TreeKind::kPiv}) {
    SignedHead old_head = log.HeadAt(tree, 3);
    LogProof proof = log.ConsistencyProof(tree, 3, 5);
    EXPECT_TRUE(VerifyConsistencyProof(proof, old_head));
    EXPECT_FALSE(VerifyConsistencyProof(proof, log.HeadAt(tree, 2)));
    LogProof same = log.ConsistencyProof(tree, 5, 5);
    EXPECT_TRUE(same.path.empty());
    EXPECT_TRUE(VerifyConsistencyProof(same, log.HeadAt(tree, 5)));
  }
  EXPECT_ACORE_ERROR(log.ConsistencyProof(TreeKind::kCert, 0, 5), ErrorCode::kOutOfRange);
  EXPECT_ACORE_ERROR(log.ConsistencyProof(TreeKind::kCert, 2, 6), ErrorCode::kOutOfRange);
}

TEST(Log, HeadTag) {
  uint64_t now = 100;
  TransparencyLog log = MakeLog(&now);
  SignedHead empty = log.Head(TreeKind::kCert);
  EXPECT_EQ(empty.tree_size, 0u);
  EXPECT_EQ(empty.timestamp, 0u);
  EXPECT_TRUE(log.CheckHeadTag(empty));
  log.Append("ca", AsBytes("c"), AsBytes("p"));
  SignedHead h = log.Head(TreeKind::kPiv);
  EXPECT_EQ(h.timestamp, 101u);
  for (auto mutate : {+[](SignedHead& x) { ++x.tree_size; },
                      +[](SignedHead& x) { ++x.timestamp; },
                      +[](SignedHead& x) { x.root.FlipBit(3); },
                      +[](SignedHead& x) { x.tag.FlipBit(200); }}) {
    SignedHead bad = h;
    mutate(bad);
    EXPECT_FALSE(log.CheckHeadTag(bad));
  }
  TransparencyLog other(256, Bytes(32, 0x43), [] { return uint64_t(101); });
  other.Authorize("ca");
  other.Append("ca", AsBytes("c"), AsBytes("p"));
  EXPECT_EQ(other.Head(TreeKind::kPiv).root, h.root);
  EXPECT_NE(other.Head(TreeKind::kPiv).tag, h.tag);
}

TEST(Log, DuplicatesAppendAndFindNewest) {
  uint64_t now = 0;
  TransparencyLog log = MakeLog(&now);
  log.Append("ca", AsBytes("c"), AsBytes("p"));
  log.Append("ca", AsBytes("x"), AsBytes("y"));
  log.Append("ca", AsBytes("c"), AsBytes("p"));
  EXPECT_EQ(log.size(), 3u);
  EXPECT_EQ(log.Find(AsBytes("c"), AsBytes("p")), 2u);
  EXPECT_FALSE(log.Find(AsBytes("c"), AsBytes("y")));
}

TEST(Log, ProofAndHeadEncodingRoundTrip) {
  uint64_t now = 0;
  TransparencyLog log = MakeLog(&now);
  for (int i = 0; i < 6; ++i) log.Append("ca", AsBytes("c" + std::to_string(i)), AsBytes("p"));
  LogProof inc = log.InclusionProof(TreeKind::kCert, 4);
  LogProof con = log.ConsistencyProof(TreeKind::kPiv, 2, 6);
  EXPECT_EQ(LogProof::Decode(inc.Encode()), inc);
  EXPECT_EQ(LogProof::Decode(con.Encode()), con);
  EXPECT_EQ(SignedHead::Decode(inc.head.Encode()), inc.head);
}

TEST(Log, MutatedLeafFailsAgainstOriginalHead) {
  uint64_t now = 0;
  TransparencyLog log = MakeLog(&now);
  for (int i = 0; i < 8; ++i) log.Append("ca", AsBytes("c" + std::to_string(i)), AsBytes("p"));
  LogProof proof = log.InclusionProof(TreeKind::kCert, 5);
  Bytes leaf = log.record(5).cert;
  leaf[0] ^= 1;
  EXPECT_FALSE(VerifyInclusionProof(proof, leaf));

  MerkleTree rebuilt(256);
  for (uint64_t i = 0; i < 8; ++i) {
    Bytes l = log.record(i).cert;
    if (i == 5) l = leaf;
    rebuilt.AppendLeaf(l);
  }
  EXPECT_NE(rebuilt.Root(), proof.head.root);
}

TEST(Log, AuditFindings) {
  auto sim = workflow::Simulation::Bootstrap("root", 1, "audit.example", 2, {});
  TransparencyLog& log = sim.log();
  AuditReport clean = log.Audit();
  EXPECT_TRUE(clean.clean());
  EXPECT_EQ(clean.tree_size, 3u);
  EXPECT_EQ(clean.invocations_per_ca.at("root"), 2u);
  EXPECT_EQ(clean.invocations_per_ca.at("root-ca1"), 1u);

  Piv foreign = sim.first_issue()->piv;
  foreign.z_ca_name = "shadow-ca";
  log.InjectForTesting("shadow-ca", sim.first_issue()->cert.Encode(), foreign.Encode());
  log.InjectForTesting("root", AsBytes("junk"), AsBytes("not a piv"));
  AuditReport flagged = log.Audit();
  ASSERT_EQ(flagged.findings.size(), 2u);
  EXPECT_EQ(flagged.findings[0].kind, AuditFinding::Kind::kUnauthorizedCa);
  EXPECT_EQ(flagged.findings[0].index, 3u);
  EXPECT_EQ(flagged.findings[1].kind, AuditFinding::Kind::kMalformedPiv);

  log.ReplaceStoredLeafForTesting(TreeKind::kCert, 1, Bytes{1, 2, 3});
  AuditReport tampered = log.Audit();
  bool root_mismatch = false, leaf_mismatch = false;
  for (const AuditFinding& f : tampered.findings) {
    if (f.kind == AuditFinding::Kind::kRootMismatch && f.tree == TreeKind::kCert)
      root_mismatch = true;
    if (f.kind == AuditFinding::Kind::kLeafMismatch && f.index == 1) leaf_mismatch = true;
  }
  EXPECT_TRUE(root_mismatch);
  EXPECT_TRUE(leaf_mismatch);
}

TEST(Log, SerializeRoundTrip) {
  uint64_t now = 0;
  TransparencyLog log = MakeLog(&now);
  log.Authorize("ca2");
  for (int i = 0; i < 9; ++i) log.Append(i % 2 ? "ca" : "ca2", AsBytes("c" + std::to_string(i)), AsBytes("p"));
  Bytes file = log.Serialize();
  TransparencyLog back = TransparencyLog::Deserialize(file, [&now] { return ++now; });
  EXPECT_EQ(back.Serialize(), file);
  EXPECT_EQ(back.Head(TreeKind::kCert), log.Head(TreeKind::kCert));
  EXPECT_EQ(back.Head(TreeKind::kPiv), log.Head(TreeKind::kPiv));
  EXPECT_EQ(back.submitters(), log.submitters());
  EXPECT_EQ(back.record(8), log.record(8));
  EXPECT_EQ(back.Find(AsBytes("c4"), AsBytes("p")), 4u);
  EXPECT_ACORE_ERROR(TransparencyLog::Deserialize(AsBytes("ACLX"), [] { return 0ull; }),
                     ErrorCode::kMalformed);
}

TEST(Log, ConcurrentReadersDuringAppends) {
  uint64_t now = 0;
  TransparencyLog log(256, Bytes(32, 1), [&now] { return ++now; });
  log.Authorize("ca");
  log.Append("ca", AsBytes("seed"), AsBytes("seed"));
  std::atomic<bool> done{false};
  std::atomic<size_t> failures{0};
  std::thread reader([&] {
    while (!done) {
      uint64_t size = log.size();
      LogProof p = log.InclusionProof(TreeKind::kCert, 0, size);
      if (!VerifyInclusionProof(p, AsBytes("seed"))) ++failures;
    }
  });
  for (int i = 0; i < 500; ++i) log.Append("ca", AsBytes(std::to_string(i)), AsBytes("p"));
  done = true;
  reader.join();
  EXPECT_EQ(failures.load(), 0u);
}

// ---- PIVs ----

TEST(Piv, ComplementAndTag) {
  Rng rng(5);
  puf::PufGroup group = puf::PufGroup::Create("ca", 4, {}, rng);
  cert::CertEntries e = testing::SampleEntries();
  Word r_up = rng.RandomWord(256), h_up = rng.RandomWord(256);
  cert::IssuedCert issued = cert::IssueUnder(e, 77, group, r_up, h_up);
  Word higher = rng.RandomWord(256);
  Piv piv = MakePiv(issued.record, group, issued.cert, higher);
  EXPECT_EQ(piv.z_rp_complement ^ issued.record.rp, group.group_proof());
  EXPECT_EQ(piv.z_rp_complement ^ *issued.cert.ext_rp, group.group_proof());
  EXPECT_EQ(piv.z_ts, 77u);
  EXPECT_EQ(piv.z_ca_name, "ca");
  EXPECT_EQ(piv.tag, ComputePivTag(issued.record.response, piv.EncodeZ(), issued.cert.Encode(),
                                   higher));
  EXPECT_EQ(Piv::Decode(piv.Encode()), piv);
  EXPECT_EQ(RootTagSentinel(256), Word(256));
}

TEST(Piv, TagCoversEveryInputBit) {
  Rng rng(6);
  Word r = rng.RandomWord(256), higher = rng.RandomWord(256);
  Piv piv;
  piv.z_ca_name = "Example Intermediate CA";
  piv.z_manufacturer = "acore-sim";
  piv.z_ts = 1'700'000'000'000ull;
  piv.z_rp_complement = rng.RandomWord(256);
  Bytes z = piv.EncodeZ();
  Bytes cert = rng.RandomBytes(300);
  const Word base = ComputePivTag(r, z, cert, higher);
  for (int i = 0; i < 1000; ++i) {
    Bytes z2 = z, c2 = cert;
    Word h2 = higher;
    switch (i % 3) {
      case 0: z2[rng.Uniform(z2.size())] ^= uint8_t(1 << rng.Uniform(8)); break;
      case 1: c2[rng.Uniform(c2.size())] ^= uint8_t(1 << rng.Uniform(8)); break;
      default: h2.FlipBit(rng.Uniform(256));
    }
    ASSERT_NE(ComputePivTag(r, z2, c2, h2), base);
  }
}

TEST(Piv, FourLevelChainSize) {
  auto sim = workflow::Simulation::Bootstrap("Example Root CA", 2, "www.example.com", 4, {});
  const PivChain& pivs = sim.first_issue()->pivs;
  ASSERT_EQ(pivs.size(), 4u);
  EXPECT_LE(EncodePivChain(pivs).size(), 1200u);
  EXPECT_EQ(DecodePivChain(EncodePivChain(pivs)), pivs);
}

// ---- Bundles ----

TEST(Bundle, RoundTripAndVerify) {
  auto sim = workflow::Simulation::Bootstrap("root", 2, "bundle.example", 2, {});
  StapledBundle b = sim.BundleFor(*sim.first_issue());
  EXPECT_EQ(b.cert_proofs.size(), 4u);
  Bytes enc = b.Encode();
  EXPECT_EQ(StapledBundle::Decode(enc), b);
  EXPECT_EQ(StapledBundle::Decode(enc).Encode(), enc);
  EXPECT_TRUE(sim.Verify(b).valid);
}

TEST(Bundle, MissingProof) {
  auto sim = workflow::Simulation::Bootstrap("root", 2, "bundle.example", 2, {});
  StapledBundle b = sim.BundleFor(*sim.first_issue());
  b.piv_proofs.pop_back();
  auto report = sim.Verify(b);
  EXPECT_FALSE(report.valid);
  EXPECT_EQ(report.failing_check, workflow::FailingCheck::kLogProof);
  EXPECT_NE(report.detail.find("missing proof"), std::string::npos);
}

TEST(Bundle, NotLogged) {
  auto sim = workflow::Simulation::Bootstrap("root", 0, "bundle.example", 1, {});
  cert::CertChain chain = sim.first_issue()->chain;
  PivChain pivs = sim.first_issue()->pivs;
  chain.certs.back().entries.subject = "other.example";
  EXPECT_ACORE_ERROR(BuildBundle(sim.log(), chain, pivs), ErrorCode::kNotLogged);
  pivs.pivs.pop_back();
  EXPECT_ACORE_ERROR(BuildBundle(sim.log(), chain, pivs), ErrorCode::kInvalidArgument);
}

TEST(Bundle, VersionAndStrictness) {
  auto sim = workflow::Simulation::Bootstrap("root", 0, "bundle.example", 1, {});
  Bytes enc = sim.BundleFor(*sim.first_issue()).Encode();
  Bytes bad = enc;
  bad[5] = 9;
  EXPECT_ACORE_ERROR(StapledBundle::Decode(bad), ErrorCode::kMalformed);
  Bytes trailing = enc;
  trailing.push_back(0);
  EXPECT_ACORE_ERROR(StapledBundle::Decode(trailing), ErrorCode::kMalformed);
}

}  // namespace
}  // namespace acore::pivlog
