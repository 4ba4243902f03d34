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

#ifndef ACORE_MERKLE_H_
#define ACORE_MERKLE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "acore/bytes.h"

namespace acore::pivlog {

// Append-only Merkle tree with RFC 6962 shape and domain separation:
// leaf = H(0x00 || data), node = H(0x01 || left || right), all n-bit.
// Perfect subtrees are cached per level so roots and proofs for any
// historical size cost O(log n) hashes.
class MerkleTree {
 public:
  explicit MerkleTree(size_t hash_bits);

  size_t hash_bits() const { return hash_bits_; }
  uint64_t size() const { return levels_[0].size(); }

  void AppendLeafHash(Word leaf_hash);
  void AppendLeaf(ByteView data) { AppendLeafHash(LeafHash(hash_bits_, data)); }
  const Word& leaf_hash(uint64_t index) const { return levels_[0].at(index); }

  Word Root() const { return RootAt(size()); }
  // Throws kOutOfRange when size > size().
  Word RootAt(uint64_t size) const;

  // Audit path for |index| in the tree of |tree_size| leaves, leaf to root.
  std::vector<Word> InclusionPath(uint64_t index, uint64_t tree_size) const;
  // 1 <= old_size <= new_size <= size(); otherwise kOutOfRange.
  std::vector<Word> ConsistencyPath(uint64_t old_size, uint64_t new_size) const;

  static Word LeafHash(size_t bits, ByteView data);
  static Word NodeHash(const Word& left, const Word& right);
  static Word EmptyRoot(size_t bits);

  static bool VerifyInclusion(const Word& leaf_hash, uint64_t index, uint64_t tree_size,
                              std::span<const Word> path, const Word& root);
  static bool VerifyConsistency(uint64_t old_size, uint64_t new_size, const Word& old_root,
                                const Word& new_root, std::span<const Word> path);

 private:
  Word SubtreeHash(uint64_t begin, uint64_t end) const;
  void InclusionPathInto(uint64_t index, uint64_t begin, uint64_t end,
                         std::vector<Word>& out) const;
  void ConsistencyPathInto(uint64_t old_size, uint64_t begin, uint64_t end, bool complete,
                           std::vector<Word>& out) const;

  size_t hash_bits_;
  // levels_[k][i] = hash of the perfect subtree over leaves [i*2^k, (i+1)*2^k).
  std::vector<std::vector<Word>> levels_;
};

}  // namespace acore::pivlog

#endif  // ACORE_MERKLE_H_
