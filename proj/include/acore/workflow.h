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

#ifndef ACORE_WORKFLOW_H_
#define ACORE_WORKFLOW_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "acore/bundle.h"
#include "acore/bytes.h"
#include "acore/cert.h"
#include "acore/crypto.h"
#include "acore/log.h"
#include "acore/piv.h"
#include "acore/puf.h"

namespace acore::workflow {

struct PinnedRoot {
  Sha256Digest cert_hash{};
  Word pi;
  Word h;  // the root level's hash pointer H(R || hc), recorded at install

  friend bool operator==(const PinnedRoot&, const PinnedRoot&) = default;
};

// Client-side trust anchors. Every head the client has observed stays known,
// so bundles stapled against an older head keep verifying.
class TrustStore {
 public:
  void PinRoot(const cert::PufCertificate& root, const Word& root_h);
  const PinnedRoot* FindPin(const Sha256Digest& cert_hash) const;
  const std::vector<PinnedRoot>& pins() const { return pins_; }

  void AddKnownHead(pivlog::TreeKind tree, const pivlog::SignedHead& head);
  bool KnowsHead(pivlog::TreeKind tree, const pivlog::SignedHead& head) const;
  size_t known_head_count(pivlog::TreeKind tree) const;

  // "ACTS" file.
  Bytes Serialize() const;
  static TrustStore Deserialize(ByteView file);

  friend bool operator==(const TrustStore&, const TrustStore&) = default;

 private:
  std::vector<PinnedRoot> pins_;
  std::set<Bytes> cert_heads_;
  std::set<Bytes> piv_heads_;
};

class RevocationList {
 public:
  void RevokeSerial(const std::string& issuer, const cert::Serial& serial);
  bool IsRevoked(const std::string& issuer, const cert::Serial& serial) const;
  void RevokeInstance(const std::string& instance_id, uint64_t since);
  bool IsInstanceRevoked(const std::string& instance_id) const;

  const std::set<std::pair<std::string, cert::Serial>>& serials() const { return serials_; }
  const std::map<std::string, uint64_t>& instances() const { return instances_; }

  // "ACRL" file.
  Bytes Serialize() const;
  static RevocationList Deserialize(ByteView file);

  friend bool operator==(const RevocationList&, const RevocationList&) = default;

 private:
  std::set<std::pair<std::string, cert::Serial>> serials_;
  std::map<std::string, uint64_t> instances_;
};

enum class FailingCheck {
  kRootPin,
  kHcRecompute,
  kInclusionProof,
  kTagMismatch,
  kLogProof,
  kExpiry,
  kRevoked,
  kMalformed,
  kUnsupported,
};

std::string_view CheckName(FailingCheck check);

struct VerificationReport {
  bool valid = false;
  std::optional<size_t> failing_level;
  std::optional<FailingCheck> failing_check;
  std::string detail;
  // Diagnostic only: R recovered per level.
  std::vector<Word> recovered_responses;

  std::string Summary() const;
};

// The signature and tag chain walk alone, no log, expiry or revocation checks.
VerificationReport VerifySignatureChain(const cert::CertChain& chain,
                                        const pivlog::PivChain& pivs, const TrustStore& store);

// Full client verification. Pure: no clock, network or PUF access.
VerificationReport VerifyBundle(const pivlog::StapledBundle& bundle, const TrustStore& store,
                                uint64_t now, const RevocationList& crl);
// Decodes first; undecodable input yields a malformed verdict.
VerificationReport VerifyBundleBytes(ByteView bundle, const TrustStore& store, uint64_t now,
                                     const RevocationList& crl);

// Stub ACME-style responder for a domain.
struct DomainActor {
  enum class Behavior { kEcho, kWrongToken, kUnresponsive };
  std::string name;
  Behavior behavior = Behavior::kEcho;

  // Throws kValidationFailed when unresponsive.
  Bytes Respond(ByteView token) const;
};

// True iff the domain echoes |token|. Throws kValidationFailed on timeout.
bool ValidateDomain(const DomainActor& domain, ByteView token);

struct IssuedRecord {
  cert::Serial serial{};
  uint64_t ts = 0;
  std::string instance_id;
  std::string subject;

  friend bool operator==(const IssuedRecord&, const IssuedRecord&) = default;
};

// Everything a PUF CA keeps besides its group: its own chain and PIVs, the
// (R, h) of its own level, and the issuance ledger.
struct CaState {
  std::string name;
  std::string parent;  // empty for the root
  puf::PufGroup group;
  cert::CertChain chain;
  pivlog::PivChain pivs;
  Word response;
  Word h;
  std::vector<IssuedRecord> issued;

  bool is_root() const { return parent.empty(); }
  bool HasSerial(const cert::Serial& serial) const;

  // "ACCA" file; the group goes to its own "ACPG" file.
  Bytes Serialize() const;
  static CaState Deserialize(ByteView file, puf::PufGroup group);
};

struct SimConfig {
  puf::PufParams params;
  uint64_t seed = 1;
  uint64_t domain_validity_ms = 90ull * 24 * 3600 * 1000;
  uint64_t ca_validity_ms = 10ull * 365 * 24 * 3600 * 1000;
  std::string manufacturer = "acore-sim";
  // Defaults to a simulated clock starting at kSimEpoch and advancing 1 ms per
  // read.
  std::function<uint64_t()> clock;
};

inline constexpr uint64_t kSimEpoch = 1'700'000'000'000ull;

struct IssueResult {
  cert::PufCertificate cert;
  pivlog::Piv piv;
  uint64_t leaf_index = 0;
  cert::IssuanceRecord record;  // private to the issuer
  cert::CertChain chain;  // root .. issued cert
  pivlog::PivChain pivs;
  double sign_ms = 0;  // PUF invocation, signature and PIV
  double log_ms = 0;   // log append
};

// All actors of the issuance workflow in one process: CAs, the log, a client
// trust store and the CRL. Single-threaded.
class Simulation {
 public:
  explicit Simulation(SimConfig config);

  // Root with |m| instances, then M intermediates named <root>-ca1 .. -caM,
  // each issued by the one above; all CAs authorized on the log and the root
  // pinned. When |domain| is non-empty the lowest CA issues it a certificate,
  // kept as first_issue().
  static Simulation Bootstrap(const std::string& root_name, size_t M, const std::string& domain,
                              size_t m, SimConfig config);

  uint64_t Now() const;
  uint64_t Tick();

  void InitRoot(const std::string& name, size_t m);
  // Throws kUnknownMember for an unknown parent.
  const CaState& CreateCa(const std::string& parent, const std::string& name, size_t m);

  // Issues |entries| under |ca_name|: authorization first, then serial
  // uniqueness, then PUF invocation, PIV and log append.
  IssueResult Issue(const std::string& ca_name, cert::CertEntries entries);
  // Domain validation, then a fresh domain certificate.
  IssueResult IssueDomain(const std::string& ca_name, const DomainActor& domain,
                          std::optional<Bytes> subject_pk = std::nullopt);
  IssueResult IssueDomain(const std::string& ca_name, const std::string& domain) {
    return IssueDomain(ca_name, DomainActor{domain});
  }

  pivlog::StapledBundle BundleFor(const IssueResult& issued) const;
  pivlog::StapledBundle BundleFor(const cert::CertChain& chain, const pivlog::PivChain& pivs) const;
  VerificationReport Verify(const pivlog::StapledBundle& bundle) const;

  void Revoke(const std::string& issuer, const cert::Serial& serial);
  // Marks the instance failed (pi updated), revokes its serials issued at or
  // after |since|, then re-issues this CA's certificate and every CA below it.
  void RevokeInstance(const std::string& ca_name, const std::string& instance_id, uint64_t since);

  // Drops every PUF seed in every CA.
  void ForgetAllSeeds();

  CaState& ca(const std::string& name);
  const CaState& ca(const std::string& name) const;
  const std::vector<std::string>& ca_names() const { return ca_order_; }
  const std::string& root_name() const { return ca_order_.front(); }
  const std::string& lowest_ca() const { return ca_order_.back(); }
  pivlog::TransparencyLog& log() { return *log_; }
  const pivlog::TransparencyLog& log() const { return *log_; }
  TrustStore& trust_store() { return store_; }
  const TrustStore& trust_store() const { return store_; }
  RevocationList& crl() { return crl_; }
  const RevocationList& crl() const { return crl_; }
  const std::optional<IssueResult>& first_issue() const { return first_issue_; }
  const SimConfig& config() const { return config_; }
  Rng& rng() { return rng_; }

  // State directory: trust.acts, crl.acrl, log.aclg, ca/<name>.acca and
  // ca/<name>.acpg (secret), cas.order.
  void Save(const std::filesystem::path& dir) const;
  static Simulation Load(const std::filesystem::path& dir, SimConfig config);

 private:
  void ReissueCa(const std::string& name);
  void RecordHeads(const pivlog::AppendResult& appended);
  cert::CertEntries CaEntries(const puf::PufGroup& subject, uint64_t ts);

  SimConfig config_;
  bool simulated_clock_ = false;
  std::shared_ptr<uint64_t> sim_now_;
  Rng rng_;
  std::map<std::string, CaState> cas_;
  std::vector<std::string> ca_order_;
  std::unique_ptr<pivlog::TransparencyLog> log_;
  TrustStore store_;
  RevocationList crl_;
  std::optional<IssueResult> first_issue_;
};

}  // namespace acore::workflow

#endif  // ACORE_WORKFLOW_H_
