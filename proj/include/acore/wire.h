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

#ifndef ACORE_WIRE_H_
#define ACORE_WIRE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acore/bytes.h"

namespace acore::wire {

// Fixed tag assignments. Within a struct container records appear once each,
// in ascending tag order. Sequence containers hold only kItem records.
namespace tag {
inline constexpr uint8_t kSubject = 0x01;
inline constexpr uint8_t kIssuer = 0x02;
inline constexpr uint8_t kSerial = 0x03;
inline constexpr uint8_t kNotBefore = 0x04;
inline constexpr uint8_t kNotAfter = 0x05;
inline constexpr uint8_t kSubjectPk = 0x06;
inline constexpr uint8_t kFlags = 0x07;
inline constexpr uint8_t kSig = 0x10;
inline constexpr uint8_t kExtRp = 0x11;
inline constexpr uint8_t kSigStyle = 0x12;

inline constexpr uint8_t kZCaName = 0x20;
inline constexpr uint8_t kZManufacturer = 0x21;
inline constexpr uint8_t kZTs = 0x22;
inline constexpr uint8_t kZRpComplement = 0x23;
inline constexpr uint8_t kPivTag = 0x24;

inline constexpr uint8_t kProofKind = 0x30;
inline constexpr uint8_t kLeafIndex = 0x31;
inline constexpr uint8_t kOldSize = 0x32;
inline constexpr uint8_t kNewSize = 0x33;
inline constexpr uint8_t kPath = 0x34;
inline constexpr uint8_t kProofHead = 0x35;
inline constexpr uint8_t kTreeSize = 0x36;
inline constexpr uint8_t kRootHash = 0x37;
inline constexpr uint8_t kHeadTimestamp = 0x38;
inline constexpr uint8_t kHeadTag = 0x39;
inline constexpr uint8_t kRecordCert = 0x3A;
inline constexpr uint8_t kRecordPiv = 0x3B;
inline constexpr uint8_t kRecordArrival = 0x3C;
inline constexpr uint8_t kRecordSubmitter = 0x3D;
inline constexpr uint8_t kLogSubmitters = 0x3E;
inline constexpr uint8_t kLogParams = 0x3F;

inline constexpr uint8_t kBundle = 0x40;
inline constexpr uint8_t kCertChain = 0x41;
inline constexpr uint8_t kPivChain = 0x42;
inline constexpr uint8_t kCertProofs = 0x43;
inline constexpr uint8_t kPivProofs = 0x44;
inline constexpr uint8_t kCertHead = 0x45;
inline constexpr uint8_t kPivHead = 0x46;
inline constexpr uint8_t kLogRecords = 0x47;
inline constexpr uint8_t kItem = 0x4F;

inline constexpr uint8_t kPinnedRoots = 0x50;
inline constexpr uint8_t kPinCertHash = 0x51;
inline constexpr uint8_t kPinPi = 0x52;
inline constexpr uint8_t kPinH = 0x53;
inline constexpr uint8_t kKnownCertHeads = 0x54;
inline constexpr uint8_t kKnownPivHeads = 0x55;

inline constexpr uint8_t kRevokedSerials = 0x60;
inline constexpr uint8_t kRevokedIssuer = 0x61;
inline constexpr uint8_t kRevokedSerial = 0x62;
inline constexpr uint8_t kRevokedInstances = 0x63;
inline constexpr uint8_t kRevokedInstanceId = 0x64;
inline constexpr uint8_t kRevokedSince = 0x65;

inline constexpr uint8_t kGroupCaName = 0x70;
inline constexpr uint8_t kGroupIdentityChallenge = 0x71;
inline constexpr uint8_t kGroupRotationSeed = 0x72;
inline constexpr uint8_t kGroupBits = 0x73;
inline constexpr uint8_t kGroupInstances = 0x74;
inline constexpr uint8_t kInstanceId = 0x75;
inline constexpr uint8_t kInstanceSeed = 0x76;
inline constexpr uint8_t kInstanceManufacturer = 0x77;
inline constexpr uint8_t kInstanceStatus = 0x78;
inline constexpr uint8_t kGroupProof = 0x79;
inline constexpr uint8_t kGroupRotationDraws = 0x7A;
inline constexpr uint8_t kInstanceIdentityResponse = 0x7B;

inline constexpr uint8_t kCaName = 0x80;
inline constexpr uint8_t kCaParent = 0x81;
inline constexpr uint8_t kCaCert = 0x82;
inline constexpr uint8_t kCaPiv = 0x83;
inline constexpr uint8_t kCaResponse = 0x84;
inline constexpr uint8_t kCaHashPointer = 0x85;
inline constexpr uint8_t kCaIssued = 0x86;
inline constexpr uint8_t kIssuedSerial = 0x87;
inline constexpr uint8_t kIssuedTs = 0x88;
inline constexpr uint8_t kIssuedInstance = 0x89;
inline constexpr uint8_t kIssuedSubject = 0x8A;

inline constexpr uint8_t kRequestOp = 0x90;
inline constexpr uint8_t kRequestCert = 0x91;
inline constexpr uint8_t kRequestPiv = 0x92;
inline constexpr uint8_t kRequestSubmitter = 0x93;
inline constexpr uint8_t kRequestTree = 0x94;
inline constexpr uint8_t kRequestIndex = 0x95;
inline constexpr uint8_t kRequestOldSize = 0x96;
inline constexpr uint8_t kRequestNewSize = 0x97;
inline constexpr uint8_t kRequestDomain = 0x98;
inline constexpr uint8_t kRequestToken = 0x99;

inline constexpr uint8_t kResponseStatus = 0xA0;
inline constexpr uint8_t kResponseError = 0xA1;
inline constexpr uint8_t kResponseLeafIndex = 0xA2;
inline constexpr uint8_t kResponseHead = 0xA3;
inline constexpr uint8_t kResponsePivHead = 0xA4;
inline constexpr uint8_t kResponseProof = 0xA5;
inline constexpr uint8_t kResponseToken = 0xA6;
}  // namespace tag

inline constexpr uint8_t kFormatVersion = 1;
inline constexpr size_t kMaxNameLength = 0xFFFF;
inline constexpr size_t kMaxFrameSize = size_t{1} << 20;

struct Record {
  uint8_t tag;
  ByteView value;
};

// Builds a struct container. Tags must be added in strictly ascending order;
// a violation is a programming error and throws.
class Writer {
 public:
  Writer& Add(uint8_t tag, ByteView value);
  Writer& AddU8(uint8_t tag, uint8_t v);
  Writer& AddU64(uint8_t tag, uint64_t v);
  Writer& AddWord(uint8_t tag, const Word& w) { return Add(tag, w.bytes()); }
  // Throws Error(kEncodingLimit) past kMaxNameLength bytes.
  Writer& AddName(uint8_t tag, std::string_view name);
  Writer& AddSequence(uint8_t tag, const std::vector<Bytes>& items);

  const Bytes& bytes() const& { return out_; }
  Bytes bytes() && { return std::move(out_); }

 private:
  Bytes out_;
  int last_tag_ = -1;
};

void AppendRecord(Bytes& out, uint8_t tag, ByteView value);

// Splits |data| into records; throws Error(kMalformed) on truncation.
std::vector<Record> SplitRecords(ByteView data);

// Strict reader over a struct container: ascending unique tags, every record
// consumed by the time Finish() is called.
class Reader {
 public:
  explicit Reader(ByteView data);

  bool Has(uint8_t tag) const;
  ByteView Require(uint8_t tag);
  std::optional<ByteView> Optional(uint8_t tag);
  uint8_t RequireU8(uint8_t tag);
  uint64_t RequireU64(uint8_t tag);
  std::string RequireName(uint8_t tag);
  Word RequireWord(uint8_t tag);
  std::vector<ByteView> RequireSequence(uint8_t tag);
  // Throws Error(kMalformed) if any record was not consumed (unknown tag).
  void Finish() const;

 private:
  std::vector<Record> records_;
  std::vector<bool> consumed_;
};

std::vector<ByteView> ParseSequence(ByteView data);

// Text armor: "-----BEGIN ACORE <label>-----", base64 in 64-char lines, then
// the matching END line.
std::string Armor(std::string_view label, ByteView body);
Bytes Dearmor(std::string_view label, std::string_view text);

// Files: 4-byte magic, version byte, then a struct container.
Bytes WrapFile(std::string_view magic, ByteView body);
ByteView UnwrapFile(std::string_view magic, ByteView file);

// Transport frames: 4-byte big-endian length followed by one container.
Bytes EncodeFrame(ByteView payload);
// Returns the payload and advances |consumed|; nullopt when |data| does not
// yet hold a whole frame. Throws Error(kFrameTooLarge).
std::optional<Bytes> DecodeFrame(ByteView data, size_t* consumed);

}  // namespace acore::wire

#endif  // ACORE_WIRE_H_
