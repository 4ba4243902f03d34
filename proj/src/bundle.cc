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

#include "acore/bundle.h"

#include "acore/error.h"
#include "acore/wire.h"

namespace acore::pivlog {

namespace {

template <typename T>
std::vector<Bytes> EncodeAll(const std::vector<T>& items) {
  std::vector<Bytes> out;
  out.reserve(items.size());
  for (const T& item : items) out.push_back(item.Encode());
  return out;
}

}  // namespace

Bytes StapledBundle::Encode() const {
  wire::Writer w;
  w.AddSequence(wire::tag::kCertChain, EncodeAll(cert_chain.certs))
      .AddSequence(wire::tag::kPivChain, EncodeAll(piv_chain.pivs))
      .AddSequence(wire::tag::kCertProofs, EncodeAll(cert_proofs))
      .AddSequence(wire::tag::kPivProofs, EncodeAll(piv_proofs))
      .Add(wire::tag::kCertHead, cert_head.Encode())
      .Add(wire::tag::kPivHead, piv_head.Encode());
  Bytes body{wire::kFormatVersion};
  const Bytes& inner = w.bytes();
  body.insert(body.end(), inner.begin(), inner.end());
  Bytes out;
  wire::AppendRecord(out, wire::tag::kBundle, body);
  return out;
}

StapledBundle StapledBundle::Decode(ByteView bytes) {
  std::vector<wire::Record> outer = wire::SplitRecords(bytes);
  if (outer.size() != 1 || outer[0].tag != wire::tag::kBundle)
    throw Error(ErrorCode::kMalformed, "expected exactly one bundle record");
  ByteView body = outer[0].value;
  if (body.empty() || body[0] != wire::kFormatVersion)
    throw Error(ErrorCode::kMalformed, "unsupported bundle version");

  wire::Reader r(body.subspan(1));
  StapledBundle b;
  for (ByteView c : r.RequireSequence(wire::tag::kCertChain))
    b.cert_chain.certs.push_back(cert::PufCertificate::Decode(c));
  for (ByteView p : r.RequireSequence(wire::tag::kPivChain))
    b.piv_chain.pivs.push_back(Piv::Decode(p));
  for (ByteView p : r.RequireSequence(wire::tag::kCertProofs))
    b.cert_proofs.push_back(LogProof::Decode(p));
  for (ByteView p : r.RequireSequence(wire::tag::kPivProofs))
    b.piv_proofs.push_back(LogProof::Decode(p));
  b.cert_head = SignedHead::Decode(r.Require(wire::tag::kCertHead));
  b.piv_head = SignedHead::Decode(r.Require(wire::tag::kPivHead));
  r.Finish();
  return b;
}

StapledBundle BuildBundle(const TransparencyLog& log, const cert::CertChain& chain,
                          const PivChain& pivs) {
  if (chain.size() != pivs.size())
    throw Error(ErrorCode::kInvalidArgument, "certificate and PIV chains differ in length");
  StapledBundle b;
  b.cert_chain = chain;
  b.piv_chain = pivs;
  const uint64_t size = log.size();
  for (size_t i = 0; i < chain.size(); ++i) {
    auto index = log.Find(chain.certs[i].Encode(), pivs.pivs[i].Encode());
    if (!index || *index >= size)
      throw Error(ErrorCode::kNotLogged,
                  "level " + std::to_string(i) + " (" + chain.certs[i].entries.subject +
                      ") has no log entry");
    b.cert_proofs.push_back(log.InclusionProof(TreeKind::kCert, *index, size));
    b.piv_proofs.push_back(log.InclusionProof(TreeKind::kPiv, *index, size));
  }
  b.cert_head = log.HeadAt(TreeKind::kCert, size);
  b.piv_head = log.HeadAt(TreeKind::kPiv, size);
  return b;
}

}  // namespace acore::pivlog
