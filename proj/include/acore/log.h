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

#ifndef ACORE_LOG_H_
#define ACORE_LOG_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "acore/bytes.h"
#include "acore/crypto.h"
#include "acore/merkle.h"

namespace acore::pivlog {

enum class TreeKind : uint8_t { kCert = 0, kPiv = 1 };
enum class ProofKind : uint8_t { kInclusion = 1, kConsistency = 2 };

std::string_view TreeName(TreeKind tree);

// SCT analogue. tag = H(log_secret || tree_size || root || timestamp), where
// timestamp is the arrival time of the newest leaf (0 for an empty tree).
struct SignedHead {
  uint64_t tree_size = 0;
  Word root;
  uint64_t timestamp = 0;
  Word tag;

  Bytes Encode() const;
  static SignedHead Decode(ByteView bytes);
  friend bool operator==(const SignedHead&, const SignedHead&) = default;
};

struct LogProof {
  ProofKind kind = ProofKind::kInclusion;
  uint64_t leaf_index = 0;  // inclusion only
  uint64_t old_size = 0;    // consistency only
  uint64_t new_size = 0;
  std::vector<Word> path;
  SignedHead head;  // the head the proof is anchored to (new_size)

  Bytes Encode() const;
  static LogProof Decode(ByteView bytes);
  friend bool operator==(const LogProof&, const LogProof&) = default;
};

// Stateless checks against the head carried in the proof. Neither checks the
// head tag; callers decide whether they trust the head.
bool VerifyInclusionProof(const LogProof& proof, ByteView leaf);
bool VerifyConsistencyProof(const LogProof& proof, const SignedHead& old_head);

struct LogRecord {
  Bytes cert;
  Bytes piv;
  uint64_t arrival = 0;
  std::string submitter;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

struct AppendResult {
  uint64_t leaf_index = 0;
  SignedHead cert_head;
  SignedHead piv_head;
};

struct AuditFinding {
  enum class Kind { kRootMismatch, kLeafMismatch, kMalformedPiv, kUnauthorizedCa };
  Kind kind;
  TreeKind tree = TreeKind::kPiv;
  uint64_t index = 0;
  std::string detail;
};

std::string_view FindingName(AuditFinding::Kind kind);

struct AuditReport {
  uint64_t tree_size = 0;
  std::vector<AuditFinding> findings;
  std::map<std::string, uint64_t> invocations_per_ca;  // by PIV z_ca_name

  bool clean() const { return findings.empty(); }
};

// Two index-aligned append-only trees (certificates, PIVs) behind a
// submitter allow-list. Appends are serialized; proofs, heads and audits take
// a shared lock and see a consistent snapshot.
class TransparencyLog {
 public:
  using Clock = std::function<uint64_t()>;

  TransparencyLog(size_t hash_bits, Bytes log_secret, Clock clock);

  size_t hash_bits() const { return hash_bits_; }
  uint64_t size() const;

  void Authorize(const std::string& ca_name);
  bool IsAuthorized(std::string_view ca_name) const;
  std::set<std::string> submitters() const;

  // Appends the pair atomically. Throws kUnauthorized (log unchanged).
  AppendResult Append(std::string_view submitter, ByteView cert, ByteView piv);

  SignedHead Head(TreeKind tree) const;
  SignedHead HeadAt(TreeKind tree, uint64_t tree_size) const;
  bool CheckHeadTag(const SignedHead& head) const;

  // kOutOfRange on bad indices or sizes. |tree_size| defaults to the current
  // size.
  LogProof InclusionProof(TreeKind tree, uint64_t index,
                          std::optional<uint64_t> tree_size = std::nullopt) const;
  LogProof ConsistencyProof(TreeKind tree, uint64_t old_size, uint64_t new_size) const;

  // Newest index holding exactly this (cert, piv) pair.
  std::optional<uint64_t> Find(ByteView cert, ByteView piv) const;
  LogRecord record(uint64_t index) const;

  // Monitor scan: recomputes both roots from the stored leaf bytes with the
  // parallel leaf-hash kernel and compares against the signed trees.
  AuditReport Audit() const;

  // Test backdoors. The first overwrites stored bytes without touching the
  // tree; the second appends past the allow-list.
  void ReplaceStoredLeafForTesting(TreeKind tree, uint64_t index, Bytes bytes);
  AppendResult InjectForTesting(std::string_view submitter, ByteView cert, ByteView piv);

  // Log file ("ACLG"); the head secret is part of the logger's own state.
  Bytes Serialize() const;
  static TransparencyLog Deserialize(ByteView file, Clock clock);

 private:
  AppendResult AppendLocked(std::string_view submitter, ByteView cert, ByteView piv);
  SignedHead HeadLocked(TreeKind tree, uint64_t tree_size) const;
  const MerkleTree& tree(TreeKind kind) const {
    return kind == TreeKind::kCert ? cert_tree_ : piv_tree_;
  }

  size_t hash_bits_;
  Bytes secret_;
  Clock clock_;
  std::set<std::string, std::less<>> submitters_;
  std::vector<LogRecord> records_;
  MerkleTree cert_tree_;
  MerkleTree piv_tree_;
  std::map<Sha256Digest, uint64_t> index_;
  std::unique_ptr<std::shared_mutex> mu_ = std::make_unique<std::shared_mutex>();
};

}  // namespace acore::pivlog

#endif  // ACORE_LOG_H_
