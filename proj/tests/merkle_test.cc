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

#include "acore/crypto.h"
#include "acore/merkle.h"
#include "test_util.h"

namespace acore::pivlog {
namespace {

const char* const kLeafInputs[8] = {"",         "00",
                                    "10",       "2021",
                                    "3031",     "40414243",
                                    "5051525354555657", "606162636465666768696a6b6c6d6e6f"};

const char* const kLeafHashes[8] = {
    "6e340b9cffb37a989ca544e6bb780a2c78901d3fb33738768511a30617afa01d",
    "96a296d224f285c67bee93c30f8a309157f0daa35dc5b87e410b78630a09cfc7",
    "0298d122906dcfc10892cb53a73992fc5b9f493ea4c9badb27b791b4127a7fe7",
    "07506a85fd9dd2f120eb694f86011e5bb4662e5c415a62917033d4a9624487e7",
    "bc1a0643b12e4d2d7c77918f44e0f4f79a838b6cf9ec5b5c283e1f4d88599e6b",
    "4271a26be0d8a84f0bd54c8c302e7cb3a3b5d1fa6780a40bcce2873477dab658",
    "b08693ec2e721597130641e8211e7eedccb4c26413963eee6c1e2ed16ffb1a5f",
    "46f6ffadd3d06a09ff3c5860d2755c8b9819db7df44251788c7d8e3180de8eb1"};

const char* const kRoots[8] = {
    "6e340b9cffb37a989ca544e6bb780a2c78901d3fb33738768511a30617afa01d",
    "fac54203e7cc696cf0dfcb42c92a1d9dbaf70ad9e621f4bd8d98662f00e3c125",
    "aeb6bcfe274b70a14fb067a5e5578264db0fa9b51af5e0ba159158f329e06e77",
    "d37ee418976dd95753c1c73862b9398fa2a2cf9b4ff0fdfe8b30cd95209614b7",
    "4e3bbb1f7b478dcfe71fb631631519a3bca12c9aefca1612bfce4c13a86264d4",
    "76e67dadbcdf1e10e1b74ddc608abd2f98dfb16fbce75277b5232a127f2087ef",
    "ddb89be403809e325750d3d263cd78929c2942b7942a34b77e122c9594a74c8c",
    "5dc9da79a70659a9ad559cb701ded9a2ab9d823aad2f4960cfe370eff4604328"};

struct PathVector {
  uint64_t a, b;
  std::vector<const char*> path;
};

const PathVector kInclusion[] = {
    {0, 1, {}},
    {0, 8,
     {"96a296d224f285c67bee93c30f8a309157f0daa35dc5b87e410b78630a09cfc7",
      "5f083f0a1a33ca076a95279832580db3e0ef4584bdff1f54c8a360f50de3031e",
      "6b47aaf29ee3c2af9af889bc1fb9254dabd31177f16232dd6aab035ca39bf6e4"}},
    {5, 8,
     {"bc1a0643b12e4d2d7c77918f44e0f4f79a838b6cf9ec5b5c283e1f4d88599e6b",
      "ca854ea128ed050b41b35ffc1b87b8eb2bde461e9e3b5596ece6b9d5975a0ae0",
      "d37ee418976dd95753c1c73862b9398fa2a2cf9b4ff0fdfe8b30cd95209614b7"}},
    {2, 3, {"fac54203e7cc696cf0dfcb42c92a1d9dbaf70ad9e621f4bd8d98662f00e3c125"}},
    {1, 5,
     {"6e340b9cffb37a989ca544e6bb780a2c78901d3fb33738768511a30617afa01d",
      "5f083f0a1a33ca076a95279832580db3e0ef4584bdff1f54c8a360f50de3031e",
      "bc1a0643b12e4d2d7c77918f44e0f4f79a838b6cf9ec5b5c283e1f4d88599e6b"}}};

const PathVector kConsistency[] = {
    {1, 1, {}},
    {1, 8,
     {"96a296d224f285c67bee93c30f8a309157f0daa35dc5b87e410b78630a09cfc7",
      "5f083f0a1a33ca076a95279832580db3e0ef4584bdff1f54c8a360f50de3031e",
      "6b47aaf29ee3c2af9af889bc1fb9254dabd31177f16232dd6aab035ca39bf6e4"}},
    {6, 8,
     {"0ebc5d3437fbe2db158b9f126a1d118e308181031d0a949f8dededebc558ef6a",
      "ca854ea128ed050b41b35ffc1b87b8eb2bde461e9e3b5596ece6b9d5975a0ae0",
      "d37ee418976dd95753c1c73862b9398fa2a2cf9b4ff0fdfe8b30cd95209614b7"}},
    {2, 5,
     {"5f083f0a1a33ca076a95279832580db3e0ef4584bdff1f54c8a360f50de3031e",
      "bc1a0643b12e4d2d7c77918f44e0f4f79a838b6cf9ec5b5c283e1f4d88599e6b"}}};

std::vector<Word> Words(const std::vector<const char*>& hex) {
  std::vector<Word> out;
  for (const char* h : hex) out.push_back(Word::FromHex(h));
  return out;
}

MerkleTree SampleTree() {
  MerkleTree t(256);
  for (const char* leaf : kLeafInputs) t.AppendLeaf(FromHex(leaf));
  return t;
}

// Recursive definitions straight from the RFC 6962 text, SHA-256.
Word OracleNode(const Word& l, const Word& r) {
  Bytes in = {0x01};
  in.insert(in.end(), l.bytes().begin(), l.bytes().end());
  in.insert(in.end(), r.bytes().begin(), r.bytes().end());
  return Word::FromBytes(Sha256(in));
}

uint64_t SplitPoint(uint64_t n) {
  uint64_t k = 1;
  while (k * 2 < n) k *= 2;
  return k;
}

Word OracleMth(const std::vector<Word>& d, uint64_t lo, uint64_t hi) {
  if (hi - lo == 1) return d[lo];
  uint64_t k = SplitPoint(hi - lo);
  return OracleNode(OracleMth(d, lo, lo + k), OracleMth(d, lo + k, hi));
}

void OraclePath(const std::vector<Word>& d, uint64_t m, uint64_t lo, uint64_t hi,
                std::vector<Word>& out) {
  if (hi - lo <= 1) return;
  uint64_t k = SplitPoint(hi - lo);
  if (m < k) {
    OraclePath(d, m, lo, lo + k, out);
    out.push_back(OracleMth(d, lo + k, hi));
  } else {
    OraclePath(d, m - k, lo + k, hi, out);
    out.push_back(OracleMth(d, lo, lo + k));
  }
}

void OracleSubproof(const std::vector<Word>& d, uint64_t m, uint64_t lo, uint64_t hi, bool b,
                    std::vector<Word>& out) {
  const uint64_t n = hi - lo;
  if (m == n) {
    if (!b) out.push_back(OracleMth(d, lo, hi));
    return;
  }
  uint64_t k = SplitPoint(n);
  if (m <= k) {
    OracleSubproof(d, m, lo, lo + k, b, out);
    out.push_back(OracleMth(d, lo + k, hi));
  } else {
    OracleSubproof(d, m - k, lo + k, hi, false, out);
    out.push_back(OracleMth(d, lo, lo + k));
  }
}

TEST(Merkle, ReferenceLeafHashesAndRoots) {
  MerkleTree t(256);
  EXPECT_EQ(MerkleTree::EmptyRoot(256).Hex(),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(t.Root(), MerkleTree::EmptyRoot(256));
  for (size_t i = 0; i < 8; ++i) {
    t.AppendLeaf(FromHex(kLeafInputs[i]));
    EXPECT_EQ(t.leaf_hash(i).Hex(), kLeafHashes[i]);
    EXPECT_EQ(t.Root().Hex(), kRoots[i]);
  }
  for (size_t i = 0; i < 8; ++i) EXPECT_EQ(t.RootAt(i + 1).Hex(), kRoots[i]);
  EXPECT_ACORE_ERROR(t.RootAt(9), ErrorCode::kOutOfRange);
}

TEST(Merkle, ReferenceInclusionProofs) {
  MerkleTree t = SampleTree();
  for (const PathVector& v : kInclusion) {
    auto path = t.InclusionPath(v.a, v.b);
    EXPECT_EQ(path, Words(v.path)) << v.a << "/" << v.b;
    EXPECT_TRUE(MerkleTree::VerifyInclusion(Word::FromHex(kLeafHashes[v.a]), v.a, v.b, path,
                                            Word::FromHex(kRoots[v.b - 1])));
  }
}

TEST(Merkle, ReferenceConsistencyProofs) {
  MerkleTree t = SampleTree();
  for (const PathVector& v : kConsistency) {
    auto path = t.ConsistencyPath(v.a, v.b);
    EXPECT_EQ(path, Words(v.path)) << v.a << "->" << v.b;
    EXPECT_TRUE(MerkleTree::VerifyConsistency(v.a, v.b, Word::FromHex(kRoots[v.a - 1]),
                                              Word::FromHex(kRoots[v.b - 1]), path));
  }
}

TEST(Merkle, SingleLeaf) {
  MerkleTree t(256);
  t.AppendLeaf(AsBytes("only"));
  EXPECT_TRUE(t.InclusionPath(0, 1).empty());
  EXPECT_EQ(t.Root(), MerkleTree::LeafHash(256, AsBytes("only")));
}

TEST(Merkle, ConsistencyIdentityAndRanges) {
  MerkleTree t = SampleTree();
  EXPECT_TRUE(t.ConsistencyPath(5, 5).empty());
  EXPECT_TRUE(MerkleTree::VerifyConsistency(5, 5, t.RootAt(5), t.RootAt(5), {}));
  EXPECT_FALSE(MerkleTree::VerifyConsistency(5, 5, t.RootAt(5), t.RootAt(6), {}));
  EXPECT_ACORE_ERROR(t.ConsistencyPath(0, 3), ErrorCode::kOutOfRange);
  EXPECT_ACORE_ERROR(t.ConsistencyPath(4, 3), ErrorCode::kOutOfRange);
  EXPECT_ACORE_ERROR(t.ConsistencyPath(4, 9), ErrorCode::kOutOfRange);
  EXPECT_ACORE_ERROR(t.InclusionPath(8, 8), ErrorCode::kOutOfRange);
  EXPECT_ACORE_ERROR(t.InclusionPath(0, 9), ErrorCode::kOutOfRange);
}

TEST(Merkle, AgreesWithRecursiveOracleUpTo64) {
  MerkleTree t(256);
  std::vector<Word> leaves;
  Rng rng(1);
  for (uint64_t n = 1; n <= 64; ++n) {
    Bytes data = rng.RandomBytes(rng.Uniform(40));
    t.AppendLeaf(data);
    leaves.push_back(MerkleTree::LeafHash(256, data));
    ASSERT_EQ(t.Root(), OracleMth(leaves, 0, n));
  }
  for (uint64_t n = 1; n <= 64; ++n) {
    for (uint64_t i = 0; i < n; ++i) {
      std::vector<Word> expected;
      OraclePath(leaves, i, 0, n, expected);
      ASSERT_EQ(t.InclusionPath(i, n), expected);
    }
    for (uint64_t m = 1; m <= n; ++m) {
      std::vector<Word> expected;
      if (m < n) OracleSubproof(leaves, m, 0, n, true, expected);
      ASSERT_EQ(t.ConsistencyPath(m, n), expected);
    }
  }
}

TEST(Merkle, AllProofsVerifyUpTo64) {
  MerkleTree t(256);
  for (uint64_t i = 0; i < 64; ++i) t.AppendLeaf(AsBytes(std::to_string(i)));
  for (uint64_t n = 1; n <= 64; ++n) {
    Word root = t.RootAt(n);
    for (uint64_t i = 0; i < n; ++i)
      ASSERT_TRUE(MerkleTree::VerifyInclusion(t.leaf_hash(i), i, n, t.InclusionPath(i, n), root));
    for (uint64_t m = 1; m <= n; ++m)
      ASSERT_TRUE(
          MerkleTree::VerifyConsistency(m, n, t.RootAt(m), root, t.ConsistencyPath(m, n)));
  }
}

TEST(Merkle, PathCorruptionFailsExhaustivelyUpTo8) {
  MerkleTree t(256);
  for (uint64_t i = 0; i < 8; ++i) t.AppendLeaf(AsBytes(std::to_string(i)));
  size_t trials = 0;
  for (uint64_t n = 1; n <= 8; ++n) {
    Word root = t.RootAt(n);
    for (uint64_t i = 0; i < n; ++i) {
      auto path = t.InclusionPath(i, n);
      for (size_t node = 0; node < path.size(); ++node)
        for (size_t bit = 0; bit < 256; ++bit) {
          auto bad = path;
          bad[node].FlipBit(bit);
          ASSERT_FALSE(MerkleTree::VerifyInclusion(t.leaf_hash(i), i, n, bad, root));
          ++trials;
        }
      Word leaf = t.leaf_hash(i);
      leaf.FlipBit(0);
      ASSERT_FALSE(MerkleTree::VerifyInclusion(leaf, i, n, path, root));
      if (n > 1) ASSERT_FALSE(MerkleTree::VerifyInclusion(t.leaf_hash(i), (i + 1) % n, n, path, root));
    }
    for (uint64_t m = 1; m < n; ++m) {
      auto path = t.ConsistencyPath(m, n);
      for (size_t node = 0; node < path.size(); ++node)
        for (size_t bit = 0; bit < 256; ++bit) {
          auto bad = path;
          bad[node].FlipBit(bit);
          ASSERT_FALSE(MerkleTree::VerifyConsistency(m, n, t.RootAt(m), root, bad));
          ++trials;
        }
      auto shorter = path;
      shorter.pop_back();
      ASSERT_FALSE(MerkleTree::VerifyConsistency(m, n, t.RootAt(m), root, shorter));
    }
  }
  EXPECT_GT(trials, 10000u);
}

TEST(Merkle, RandomCorruptionFailsUpTo64) {
  MerkleTree t(256);
  for (uint64_t i = 0; i < 64; ++i) t.AppendLeaf(AsBytes(std::to_string(i)));
  Rng rng(2);
  for (int trial = 0; trial < 5000; ++trial) {
    uint64_t n = 9 + rng.Uniform(56);
    uint64_t i = rng.Uniform(n);
    auto path = t.InclusionPath(i, n);
    path[rng.Uniform(path.size())].FlipBit(rng.Uniform(256));
    ASSERT_FALSE(MerkleTree::VerifyInclusion(t.leaf_hash(i), i, n, path, t.RootAt(n)));
    uint64_t m = 1 + rng.Uniform(n - 1);
    auto cpath = t.ConsistencyPath(m, n);
    cpath[rng.Uniform(cpath.size())].FlipBit(rng.Uniform(256));
    ASSERT_FALSE(MerkleTree::VerifyConsistency(m, n, t.RootAt(m), t.RootAt(n), cpath));
  }
}

TEST(Merkle, HistoricalLeafMutationBreaksConsistency) {
  MerkleTree honest(256), forked(256);
  for (int i = 0; i < 10; ++i) {
    honest.AppendLeaf(AsBytes(std::to_string(i)));
    forked.AppendLeaf(AsBytes(i == 3 ? std::string("x") : std::to_string(i)));
  }
  EXPECT_FALSE(MerkleTree::VerifyConsistency(5, 10, honest.RootAt(5), forked.RootAt(10),
                                             forked.ConsistencyPath(5, 10)));
}

TEST(Merkle, ToyWidth) {
  MerkleTree t(16);
  for (int i = 0; i < 20; ++i) t.AppendLeaf(AsBytes(std::to_string(i)));
  EXPECT_EQ(t.Root().bits(), 16u);
  EXPECT_TRUE(MerkleTree::VerifyInclusion(t.leaf_hash(7), 7, 20, t.InclusionPath(7, 20), t.Root()));
}

}  // namespace
}  // namespace acore::pivlog
