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

#include "acore/log.h"

#include <mutex>

#include "acore/error.h"
#include "acore/kernels.h"
#include "acore/piv.h"
#include "acore/wire.h"

namespace acore::pivlog {

namespace {

constexpr std::string_view kLogMagic = "ACLG";

Sha256Digest PairKey(ByteView cert, ByteView piv) {
  Bytes buf;
  AppendU32(buf, uint32_t(cert.size()));
  buf.insert(buf.end(), cert.begin(), cert.end());
  buf.insert(buf.end(), piv.begin(), piv.end());
  return Sha256(buf);
}

Bytes EncodePath(const std::vector<Word>& path) {
  Bytes out;
  for (const Word& w : path) out.insert(out.end(), w.bytes().begin(), w.bytes().end());
  return out;
}

}  // namespace

std::string_view TreeName(TreeKind tree) {
  return tree == TreeKind::kCert ? "cert" : "piv";
}

std::string_view FindingName(AuditFinding::Kind kind) {
  switch (kind) {
    case AuditFinding::Kind::kRootMismatch: return "root-mismatch";
    case AuditFinding::Kind::kLeafMismatch: return "leaf-mismatch";
    case AuditFinding::Kind::kMalformedPiv: return "malformed-piv";
    case AuditFinding::Kind::kUnauthorizedCa: return "unauthorized-ca";
  }
  return "unknown";
}

Bytes SignedHead::Encode() const {
  wire::Writer w;
  w.AddU64(wire::tag::kTreeSize, tree_size)
      .AddWord(wire::tag::kRootHash, root)
      .AddU64(wire::tag::kHeadTimestamp, timestamp)
      .AddWord(wire::tag::kHeadTag, tag);
  return std::move(w).bytes();
}

SignedHead SignedHead::Decode(ByteView bytes) {
  wire::Reader r(bytes);
  SignedHead h;
  h.tree_size = r.RequireU64(wire::tag::kTreeSize);
  h.root = r.RequireWord(wire::tag::kRootHash);
  h.timestamp = r.RequireU64(wire::tag::kHeadTimestamp);
  h.tag = r.RequireWord(wire::tag::kHeadTag);
  r.Finish();
  if (h.root.bits() != h.tag.bits())
    throw Error(ErrorCode::kMalformed, "head root and tag lengths differ");
  return h;
}

Bytes LogProof::Encode() const {
  wire::Writer w;
  w.AddU8(wire::tag::kProofKind, uint8_t(kind));
  if (kind == ProofKind::kInclusion)
    w.AddU64(wire::tag::kLeafIndex, leaf_index);
  else
    w.AddU64(wire::tag::kOldSize, old_size);
  w.AddU64(wire::tag::kNewSize, new_size)
      .Add(wire::tag::kPath, EncodePath(path))
      .Add(wire::tag::kProofHead, head.Encode());
  return std::move(w).bytes();
}

LogProof LogProof::Decode(ByteView bytes) {
  wire::Reader r(bytes);
  LogProof p;
  uint8_t kind = r.RequireU8(wire::tag::kProofKind);
  if (kind == uint8_t(ProofKind::kInclusion)) {
    p.kind = ProofKind::kInclusion;
    p.leaf_index = r.RequireU64(wire::tag::kLeafIndex);
  } else if (kind == uint8_t(ProofKind::kConsistency)) {
    p.kind = ProofKind::kConsistency;
    p.old_size = r.RequireU64(wire::tag::kOldSize);
  } else {
    throw Error(ErrorCode::kMalformed, "unknown proof kind " + std::to_string(kind));
  }
  p.new_size = r.RequireU64(wire::tag::kNewSize);
  ByteView path = r.Require(wire::tag::kPath);
  p.head = SignedHead::Decode(r.Require(wire::tag::kProofHead));
  r.Finish();
  const size_t width = p.head.root.size();
  if (path.size() % width != 0)
    throw Error(ErrorCode::kMalformed, "proof path is not a whole number of hashes");
  for (size_t i = 0; i < path.size(); i += width)
    p.path.push_back(Word::FromBytes(path.subspan(i, width)));
  return p;
}

bool VerifyInclusionProof(const LogProof& proof, ByteView leaf) {
  if (proof.kind != ProofKind::kInclusion) return false;
  if (proof.new_size != proof.head.tree_size) return false;
  Word leaf_hash = MerkleTree::LeafHash(proof.head.root.bits(), leaf);
  return MerkleTree::VerifyInclusion(leaf_hash, proof.leaf_index, proof.new_size, proof.path,
                                     proof.head.root);
}

bool VerifyConsistencyProof(const LogProof& proof, const SignedHead& old_head) {
  if (proof.kind != ProofKind::kConsistency) return false;
  if (proof.new_size != proof.head.tree_size || proof.old_size != old_head.tree_size)
    return false;
  return MerkleTree::VerifyConsistency(proof.old_size, proof.new_size, old_head.root,
                                       proof.head.root, proof.path);
}

TransparencyLog::TransparencyLog(size_t hash_bits, Bytes log_secret, Clock clock)
    : hash_bits_(hash_bits),
      secret_(std::move(log_secret)),
      clock_(std::move(clock)),
      cert_tree_(hash_bits),
      piv_tree_(hash_bits) {
  if (secret_.empty()) throw Error(ErrorCode::kInvalidArgument, "empty log secret");
  if (!clock_) throw Error(ErrorCode::kInvalidArgument, "log needs a clock");
}

uint64_t TransparencyLog::size() const {
  std::shared_lock lock(*mu_);
  return records_.size();
}

void TransparencyLog::Authorize(const std::string& ca_name) {
  std::unique_lock lock(*mu_);
  submitters_.insert(ca_name);
}

bool TransparencyLog::IsAuthorized(std::string_view ca_name) const {
  std::shared_lock lock(*mu_);
  return submitters_.find(ca_name) != submitters_.end();
}

std::set<std::string> TransparencyLog::submitters() const {
  std::shared_lock lock(*mu_);
  return {submitters_.begin(), submitters_.end()};
}

AppendResult TransparencyLog::Append(std::string_view submitter, ByteView cert, ByteView piv) {
  std::unique_lock lock(*mu_);
  if (submitters_.find(submitter) == submitters_.end())
    throw Error(ErrorCode::kUnauthorized,
                "submitter " + std::string(submitter) + " is not authorized by the log");
  return AppendLocked(submitter, cert, piv);
}

AppendResult TransparencyLog::InjectForTesting(std::string_view submitter, ByteView cert,
                                               ByteView piv) {
  std::unique_lock lock(*mu_);
  return AppendLocked(submitter, cert, piv);
}

AppendResult TransparencyLog::AppendLocked(std::string_view submitter, ByteView cert,
                                           ByteView piv) {
  LogRecord rec{{cert.begin(), cert.end()}, {piv.begin(), piv.end()}, clock_(),
                std::string(submitter)};
  const uint64_t index = records_.size();
  cert_tree_.AppendLeaf(cert);
  piv_tree_.AppendLeaf(piv);
  index_[PairKey(cert, piv)] = index;
  records_.push_back(std::move(rec));
  return {index, HeadLocked(TreeKind::kCert, index + 1), HeadLocked(TreeKind::kPiv, index + 1)};
}

SignedHead TransparencyLog::HeadLocked(TreeKind kind, uint64_t tree_size) const {
  SignedHead h;
  h.tree_size = tree_size;
  h.root = tree(kind).RootAt(tree_size);
  h.timestamp = tree_size == 0 ? 0 : records_[tree_size - 1].arrival;
  Bytes fields;
  AppendU64(fields, h.tree_size);
  Bytes ts;
  AppendU64(ts, h.timestamp);
  h.tag = HashBits(hash_bits_, ByteView(secret_), fields, h.root, ts);
  return h;
}

SignedHead TransparencyLog::Head(TreeKind kind) const {
  std::shared_lock lock(*mu_);
  return HeadLocked(kind, records_.size());
}

SignedHead TransparencyLog::HeadAt(TreeKind kind, uint64_t tree_size) const {
  std::shared_lock lock(*mu_);
  return HeadLocked(kind, tree_size);
}

bool TransparencyLog::CheckHeadTag(const SignedHead& head) const {
  if (head.root.bits() != hash_bits_) return false;
  Bytes fields;
  AppendU64(fields, head.tree_size);
  Bytes ts;
  AppendU64(ts, head.timestamp);
  return HashBits(hash_bits_, ByteView(secret_), fields, head.root, ts) == head.tag;
}

LogProof TransparencyLog::InclusionProof(TreeKind kind, uint64_t index,
                                         std::optional<uint64_t> tree_size) const {
  std::shared_lock lock(*mu_);
  LogProof p;
  p.kind = ProofKind::kInclusion;
  p.leaf_index = index;
  p.new_size = tree_size.value_or(records_.size());
  p.path = tree(kind).InclusionPath(index, p.new_size);
  p.head = HeadLocked(kind, p.new_size);
  return p;
}

LogProof TransparencyLog::ConsistencyProof(TreeKind kind, uint64_t old_size,
                                           uint64_t new_size) const {
  std::shared_lock lock(*mu_);
  LogProof p;
  p.kind = ProofKind::kConsistency;
  p.old_size = old_size;
  p.new_size = new_size;
  p.path = tree(kind).ConsistencyPath(old_size, new_size);
  p.head = HeadLocked(kind, new_size);
  return p;
}

std::optional<uint64_t> TransparencyLog::Find(ByteView cert, ByteView piv) const {
  std::shared_lock lock(*mu_);
  auto it = index_.find(PairKey(cert, piv));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

LogRecord TransparencyLog::record(uint64_t index) const {
  std::shared_lock lock(*mu_);
  if (index >= records_.size())
    throw Error(ErrorCode::kOutOfRange, "no log record " + std::to_string(index));
  return records_[index];
}

void TransparencyLog::ReplaceStoredLeafForTesting(TreeKind kind, uint64_t index, Bytes bytes) {
  std::unique_lock lock(*mu_);
  LogRecord& rec = records_.at(index);
  (kind == TreeKind::kCert ? rec.cert : rec.piv) = std::move(bytes);
}

AuditReport TransparencyLog::Audit() const {
  std::shared_lock lock(*mu_);
  AuditReport report;
  report.tree_size = records_.size();

  for (TreeKind kind : {TreeKind::kCert, TreeKind::kPiv}) {
    std::vector<Bytes> leaves;
    leaves.reserve(records_.size());
    for (const LogRecord& rec : records_)
      leaves.push_back(kind == TreeKind::kCert ? rec.cert : rec.piv);
    std::vector<Word> hashes = kernels::HashLeavesParallel(leaves, hash_bits_);

    MerkleTree rebuilt(hash_bits_);
    for (size_t i = 0; i < hashes.size(); ++i) {
      if (hashes[i] != tree(kind).leaf_hash(i))
        report.findings.push_back({AuditFinding::Kind::kLeafMismatch, kind, i,
                                   "stored bytes no longer match the logged leaf"});
      rebuilt.AppendLeafHash(hashes[i]);
    }
    if (rebuilt.Root() != tree(kind).Root())
      report.findings.push_back({AuditFinding::Kind::kRootMismatch, kind, records_.size(),
                                 "recomputed " + std::string(TreeName(kind)) +
                                     " root differs from the signed head"});
  }

  for (size_t i = 0; i < records_.size(); ++i) {
    try {
      Piv piv = Piv::Decode(records_[i].piv);
      ++report.invocations_per_ca[piv.z_ca_name];
      if (submitters_.find(piv.z_ca_name) == submitters_.end())
        report.findings.push_back({AuditFinding::Kind::kUnauthorizedCa, TreeKind::kPiv, i,
                                   "PIV names unauthorized CA " + piv.z_ca_name});
    } catch (const Error& e) {
      report.findings.push_back({AuditFinding::Kind::kMalformedPiv, TreeKind::kPiv, i, e.what()});
    }
  }
  return report;
}

Bytes TransparencyLog::Serialize() const {
  std::shared_lock lock(*mu_);
  std::vector<Bytes> names;
  for (const std::string& s : submitters_) names.emplace_back(s.begin(), s.end());
  Bytes params;
  AppendU64(params, hash_bits_);
  params.insert(params.end(), secret_.begin(), secret_.end());
  std::vector<Bytes> recs;
  for (const LogRecord& rec : records_) {
    wire::Writer w;
    w.Add(wire::tag::kRecordCert, rec.cert)
        .Add(wire::tag::kRecordPiv, rec.piv)
        .AddU64(wire::tag::kRecordArrival, rec.arrival)
        .AddName(wire::tag::kRecordSubmitter, rec.submitter);
    recs.push_back(std::move(w).bytes());
  }
  wire::Writer w;
  w.AddSequence(wire::tag::kLogSubmitters, names)
      .Add(wire::tag::kLogParams, params)
      .AddSequence(wire::tag::kLogRecords, recs);
  return wire::WrapFile(kLogMagic, std::move(w).bytes());
}

TransparencyLog TransparencyLog::Deserialize(ByteView file, Clock clock) {
  wire::Reader r(wire::UnwrapFile(kLogMagic, file));
  std::vector<ByteView> names = r.RequireSequence(wire::tag::kLogSubmitters);
  ByteView params = r.Require(wire::tag::kLogParams);
  std::vector<ByteView> recs = r.RequireSequence(wire::tag::kLogRecords);
  r.Finish();
  if (params.size() <= 8) throw Error(ErrorCode::kMalformed, "log parameters truncated");
  uint64_t bits = ReadU64(params.first(8));
  if (bits == 0 || bits % 8 != 0 || bits > 4096)
    throw Error(ErrorCode::kMalformed, "bad log hash width");
  TransparencyLog log(size_t(bits), Bytes(params.begin() + 8, params.end()), std::move(clock));
  for (ByteView n : names) log.submitters_.emplace(n.begin(), n.end());

  std::vector<Bytes> cert_leaves, piv_leaves;
  for (ByteView item : recs) {
    wire::Reader rr(item);
    LogRecord rec;
    ByteView c = rr.Require(wire::tag::kRecordCert);
    ByteView p = rr.Require(wire::tag::kRecordPiv);
    rec.cert.assign(c.begin(), c.end());
    rec.piv.assign(p.begin(), p.end());
    rec.arrival = rr.RequireU64(wire::tag::kRecordArrival);
    rec.submitter = rr.RequireName(wire::tag::kRecordSubmitter);
    rr.Finish();
    log.index_[PairKey(rec.cert, rec.piv)] = log.records_.size();
    cert_leaves.push_back(rec.cert);
    piv_leaves.push_back(rec.piv);
    log.records_.push_back(std::move(rec));
  }
  for (Word& h : kernels::HashLeavesParallel(cert_leaves, log.hash_bits_))
    log.cert_tree_.AppendLeafHash(std::move(h));
  for (Word& h : kernels::HashLeavesParallel(piv_leaves, log.hash_bits_))
    log.piv_tree_.AppendLeafHash(std::move(h));
  return log;
}

}  // namespace acore::pivlog
