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

#ifndef ACORE_CERT_H_
#define ACORE_CERT_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acore/bytes.h"
#include "acore/crypto.h"
#include "acore/puf.h"

namespace acore::cert {

using Serial = std::array<uint8_t, 8>;

// To-be-signed entries ("crt"). Timestamps are epoch milliseconds.
struct CertEntries {
  std::string subject;
  std::string issuer;
  Serial serial{};
  uint64_t not_before = 0;
  uint64_t not_after = 0;
  // Domain: opaque public key. PUF CA: the subject group's pi.
  Bytes subject_pk;
  bool is_ca = false;
  bool root_flag = false;

  void Validate() const;
  friend bool operator==(const CertEntries&, const CertEntries&) = default;
};

enum class SigStyle : uint8_t { kPufSigned = 0, kClassicSigned = 1 };

struct PufCertificate {
  CertEntries entries;
  Word sig;
  // RP_k of the issuing instance; absent on the root.
  std::optional<Word> ext_rp;
  SigStyle style = SigStyle::kPufSigned;

  Bytes Encode() const;
  // Strict; throws Error(kMalformed).
  static PufCertificate Decode(ByteView bytes);
  Sha256Digest Fingerprint() const { return Sha256(Encode()); }

  friend bool operator==(const PufCertificate&, const PufCertificate&) = default;
};

// Ordered root first, domain (or lowest CA) last.
struct CertChain {
  std::vector<PufCertificate> certs;

  // Structural invariants: non-empty, root first, issuer/subject linkage,
  // shared n, ext_rp on every non-root PUF-signed cert. Throws kMalformed.
  void Validate() const;
  size_t size() const { return certs.size(); }
  friend bool operator==(const CertChain&, const CertChain&) = default;
};

// Canonical TLV of the entries, ascending tags 0x01..0x07.
// Throws kEncodingLimit for names longer than 65535 bytes.
Bytes EncodeEntries(const CertEntries& entries);
CertEntries DecodeEntries(ByteView bytes);

// hc = H(crt || ts || N_CA): entries TLV, 8-byte big-endian ts, then the
// issuer name as a 0x20 record.
Word ComputeHc(const CertEntries& entries, uint64_t ts, std::string_view issuer_name,
               size_t n_bits);

struct LevelSignature {
  Word sig;
  Word h;  // hash pointer handed to the next lower level
};

// h = H(R_up || hc || h_up), sig = R ^ h. Throws kInvalidArgument on length
// mismatch.
LevelSignature SignLevel(const Word& hc, const Word& response, const Word& issuer_response,
                         const Word& issuer_h);
// Root: h = H(R || hc), sig = R ^ h.
LevelSignature SignRoot(const Word& hc, const Word& response);

// What the issuer keeps from one PUF invocation; the PIV is built from it.
struct IssuanceRecord {
  uint64_t ts = 0;
  std::string instance_id;
  std::string manufacturer;
  Word response;     // R used in sig
  Word h;            // hash pointer of this level
  Word rp;           // identity response of the used instance
  Word issuer_proof; // issuer group's pi at issuance time
};

struct IssuedCert {
  PufCertificate cert;
  IssuanceRecord record;
};

// Self-signed root. Sets subject_pk to the group's pi and issuer to subject.
// Throws kInvalidArgument without root_flag; kGroupExhausted propagates.
IssuedCert RootSelfSign(CertEntries entries, uint64_t ts, puf::PufGroup& root_group);

// One level below an issuer whose own certificate carries (issuer_response,
// issuer_h). The issuer name is taken from the group.
IssuedCert IssueUnder(CertEntries entries, uint64_t ts, puf::PufGroup& issuer_group,
                      const Word& issuer_response, const Word& issuer_h);

struct BuiltChain {
  CertChain chain;
  std::vector<IssuanceRecord> records;  // aligned with chain.certs
};

struct ChainOptions {
  uint64_t ca_validity_ms = 10ull * 365 * 24 * 3600 * 1000;
};

// Root -> intermediates[0] -> ... -> intermediates[M-1] -> domain. CA entries
// are generated from the group names; serials are drawn from |rng|.
BuiltChain BuildChain(puf::PufGroup& root_group, std::span<puf::PufGroup> intermediates,
                      const CertEntries& domain_entries,
                      const std::function<uint64_t()>& ts_source, Rng& rng,
                      const ChainOptions& options = {});

Serial RandomSerial(Rng& rng);

}  // namespace acore::cert

#endif  // ACORE_CERT_H_
