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

#include "acore/piv.h"

#include "acore/error.h"
#include "acore/wire.h"

namespace acore::pivlog {

namespace {

void WriteZ(wire::Writer& w, const Piv& p) {
  w.AddName(wire::tag::kZCaName, p.z_ca_name)
      .AddName(wire::tag::kZManufacturer, p.z_manufacturer)
      .AddU64(wire::tag::kZTs, p.z_ts)
      .AddWord(wire::tag::kZRpComplement, p.z_rp_complement);
}

}  // namespace

Bytes Piv::EncodeZ() const {
  wire::Writer w;
  WriteZ(w, *this);
  return std::move(w).bytes();
}

Bytes Piv::Encode() const {
  wire::Writer w;
  WriteZ(w, *this);
  w.AddWord(wire::tag::kPivTag, tag);
  return std::move(w).bytes();
}

Piv Piv::Decode(ByteView bytes) {
  wire::Reader r(bytes);
  Piv p;
  p.z_ca_name = r.RequireName(wire::tag::kZCaName);
  p.z_manufacturer = r.RequireName(wire::tag::kZManufacturer);
  p.z_ts = r.RequireU64(wire::tag::kZTs);
  p.z_rp_complement = r.RequireWord(wire::tag::kZRpComplement);
  p.tag = r.RequireWord(wire::tag::kPivTag);
  r.Finish();
  if (p.tag.bits() != p.z_rp_complement.bits())
    throw Error(ErrorCode::kMalformed, "PIV tag and complement lengths differ");
  return p;
}

Bytes EncodePivChain(const PivChain& chain) {
  Bytes out;
  for (const Piv& p : chain.pivs) wire::AppendRecord(out, wire::tag::kItem, p.Encode());
  return out;
}

PivChain DecodePivChain(ByteView bytes) {
  PivChain chain;
  for (ByteView item : wire::ParseSequence(bytes)) chain.pivs.push_back(Piv::Decode(item));
  return chain;
}

Word RootTagSentinel(size_t n_bits) { return Word(n_bits); }

Word ComputePivTag(const Word& response, ByteView encoded_z, ByteView encoded_cert,
                   const Word& higher_tag) {
  if (higher_tag.bits() != response.bits())
    throw Error(ErrorCode::kInvalidArgument, "higher tag length differs from response");
  return HashBits(response.bits(), response, encoded_z, encoded_cert, higher_tag);
}

Piv MakePiv(const cert::IssuanceRecord& record, const puf::PufGroup& issuer_group,
            const cert::PufCertificate& certificate, const Word& higher_tag) {
  Piv p;
  p.z_ca_name = issuer_group.ca_name();
  p.z_manufacturer = record.manufacturer;
  p.z_ts = record.ts;
  p.z_rp_complement = issuer_group.group_proof() ^ record.rp;
  p.tag = ComputePivTag(record.response, p.EncodeZ(), certificate.Encode(), higher_tag);
  return p;
}

}  // namespace acore::pivlog
