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

#include "acore/merkle.h"

#include <bit>

#include "acore/crypto.h"
#include "acore/error.h"

namespace acore::pivlog {

namespace {

// Largest power of two strictly below n, n >= 2.
uint64_t SplitPoint(uint64_t n) { return std::bit_floor(n - 1); }

}  // namespace

MerkleTree::MerkleTree(size_t hash_bits) : hash_bits_(hash_bits), levels_(1) {
  [[maybe_unused]] Word width_check(hash_bits);
}

Word MerkleTree::LeafHash(size_t bits, ByteView data) {
  Hasher h(bits);
  h.Update(uint8_t{0x00}).Update(data);
  return h.Finish();
}

Word MerkleTree::NodeHash(const Word& left, const Word& right) {
  Hasher h(left.bits());
  h.Update(uint8_t{0x01}).Update(left).Update(right);
  return h.Finish();
}

Word MerkleTree::EmptyRoot(size_t bits) { return Hasher(bits).Finish(); }

void MerkleTree::AppendLeafHash(Word leaf_hash) {
  if (leaf_hash.bits() != hash_bits_)
    throw Error(ErrorCode::kInvalidArgument, "leaf hash width differs from tree");
  levels_[0].push_back(std::move(leaf_hash));
  for (size_t k = 0;; ++k) {
    const auto& level = levels_[k];
    if (level.size() % 2 != 0) break;
    Word parent = NodeHash(level[level.size() - 2], level[level.size() - 1]);
    if (levels_.size() == k + 1) levels_.emplace_back();
    levels_[k + 1].push_back(std::move(parent));
  }
}

Word MerkleTree::SubtreeHash(uint64_t begin, uint64_t end) const {
  const uint64_t n = end - begin;
  if (n == 1) return levels_[0][begin];
  if (std::has_single_bit(n) && begin % n == 0) {
    size_t k = size_t(std::countr_zero(n));
    return levels_[k][begin >> k];
  }
  uint64_t k = SplitPoint(n);
  return NodeHash(SubtreeHash(begin, begin + k), SubtreeHash(begin + k, end));
}

Word MerkleTree::RootAt(uint64_t tree_size) const {
  if (tree_size > size())
    throw Error(ErrorCode::kOutOfRange, "tree size " + std::to_string(tree_size) +
                                            " beyond log size " + std::to_string(size()));
  if (tree_size == 0) return EmptyRoot(hash_bits_);
  return SubtreeHash(0, tree_size);
}

void MerkleTree::InclusionPathInto(uint64_t index, uint64_t begin, uint64_t end,
                                   std::vector<Word>& out) const {
  const uint64_t n = end - begin;
  if (n == 1) return;
  const uint64_t k = SplitPoint(n);
  if (index < k) {
    InclusionPathInto(index, begin, begin + k, out);
    out.push_back(SubtreeHash(begin + k, end));
  } else {
    InclusionPathInto(index - k, begin + k, end, out);
    out.push_back(SubtreeHash(begin, begin + k));
  }
}

std::vector<Word> MerkleTree::InclusionPath(uint64_t index, uint64_t tree_size) const {
  if (tree_size > size() || index >= tree_size)
    throw Error(ErrorCode::kOutOfRange, "leaf " + std::to_string(index) +
                                            " outside tree of size " + std::to_string(tree_size));
  std::vector<Word> out;
  InclusionPathInto(index, 0, tree_size, out);
  return out;
}

void MerkleTree::ConsistencyPathInto(uint64_t old_size, uint64_t begin, uint64_t end,
                                     bool complete, std::vector<Word>& out) const {
  const uint64_t n = end - begin;
  if (old_size == n) {
    if (!complete) out.push_back(SubtreeHash(begin, end));
    return;
  }
  const uint64_t k = SplitPoint(n);
  if (old_size <= k) {
    ConsistencyPathInto(old_size, begin, begin + k, complete, out);
    out.push_back(SubtreeHash(begin + k, end));
  } else {
    ConsistencyPathInto(old_size - k, begin + k, end, false, out);
    out.push_back(SubtreeHash(begin, begin + k));
  }
}

std::vector<Word> MerkleTree::ConsistencyPath(uint64_t old_size, uint64_t new_size) const {
  if (old_size == 0 || old_size > new_size || new_size > size())
    throw Error(ErrorCode::kOutOfRange, "consistency sizes " + std::to_string(old_size) +
                                            " -> " + std::to_string(new_size) + " invalid");
  std::vector<Word> out;
  if (old_size < new_size) ConsistencyPathInto(old_size, 0, new_size, true, out);
  return out;
}

bool MerkleTree::VerifyInclusion(const Word& leaf_hash, uint64_t index, uint64_t tree_size,
                                 std::span<const Word> path, const Word& root) {
  if (index >= tree_size) return false;
  for (const Word& p : path)
    if (p.bits() != leaf_hash.bits()) return false;
  if (root.bits() != leaf_hash.bits()) return false;
  uint64_t fn = index;
  uint64_t sn = tree_size - 1;
  Word r = leaf_hash;
  for (const Word& p : path) {
    if (sn == 0) return false;
    if ((fn & 1) || fn == sn) {
      r = NodeHash(p, r);
      while (!(fn & 1) && fn != 0) {
        fn >>= 1;
        sn >>= 1;
      }
    } else {
      r = NodeHash(r, p);
    }
    fn >>= 1;
    sn >>= 1;
  }
  return sn == 0 && r == root;
}

bool MerkleTree::VerifyConsistency(uint64_t old_size, uint64_t new_size, const Word& old_root,
                                   const Word& new_root, std::span<const Word> path) {
  if (old_size == 0 || old_size > new_size) return false;
  if (old_root.bits() != new_root.bits()) return false;
  for (const Word& p : path)
    if (p.bits() != old_root.bits()) return false;
  if (old_size == new_size) return path.empty() && old_root == new_root;
  if (path.empty()) return false;

  std::vector<Word> nodes;
  if (std::has_single_bit(old_size)) nodes.push_back(old_root);
  nodes.insert(nodes.end(), path.begin(), path.end());

  uint64_t fn = old_size - 1;
  uint64_t sn = new_size - 1;
  while (fn & 1) {
    fn >>= 1;
    sn >>= 1;
  }
  Word fr = nodes[0];
  Word sr = nodes[0];
  for (size_t i = 1; i < nodes.size(); ++i) {
    const Word& c = nodes[i];
    if (sn == 0) return false;
    if ((fn & 1) || fn == sn) {
      fr = NodeHash(c, fr);
      sr = NodeHash(c, sr);
      while (!(fn & 1) && fn != 0) {
        fn >>= 1;
        sn >>= 1;
      }
    } else {
      sr = NodeHash(sr, c);
    }
    fn >>= 1;
    sn >>= 1;
  }
  return sn == 0 && fr == old_root && sr == new_root;
}

}  // namespace acore::pivlog
