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

#include "acore/cert.h"

#include "acore/error.h"
#include "acore/wire.h"

namespace acore::cert {

namespace {

constexpr uint8_t kFlagIsCa = 0x01;
constexpr uint8_t kFlagRoot = 0x02;

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformed, what);
}

void WriteEntries(wire::Writer& w, const CertEntries& e) {
  uint8_t flags = (e.is_ca ? kFlagIsCa : 0) | (e.root_flag ? kFlagRoot : 0);
  w.AddName(wire::tag::kSubject, e.subject)
      .AddName(wire::tag::kIssuer, e.issuer)
      .Add(wire::tag::kSerial, e.serial)
      .AddU64(wire::tag::kNotBefore, e.not_before)
      .AddU64(wire::tag::kNotAfter, e.not_after)
      .Add(wire::tag::kSubjectPk, e.subject_pk)
      .AddU8(wire::tag::kFlags, flags);
}

CertEntries ReadEntries(wire::Reader& r) {
  CertEntries e;
  e.subject = r.RequireName(wire::tag::kSubject);
  e.issuer = r.RequireName(wire::tag::kIssuer);
  ByteView serial = r.Require(wire::tag::kSerial);
  if (serial.size() != e.serial.size()) Malformed("serial must be 8 bytes");
  std::copy(serial.begin(), serial.end(), e.serial.begin());
  e.not_before = r.RequireU64(wire::tag::kNotBefore);
  e.not_after = r.RequireU64(wire::tag::kNotAfter);
  ByteView pk = r.Require(wire::tag::kSubjectPk);
  e.subject_pk.assign(pk.begin(), pk.end());
  uint8_t flags = r.RequireU8(wire::tag::kFlags);
  if (flags & ~(kFlagIsCa | kFlagRoot)) Malformed("unknown flag bits");
  e.is_ca = flags & kFlagIsCa;
  e.root_flag = flags & kFlagRoot;
  if (e.not_before >= e.not_after) Malformed("not_before must precede not_after");
  return e;
}

void RequireSameLength(const Word& a, const Word& b, const char* what) {
  if (a.bits() != b.bits())
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " length differs from hc");
}

}  // namespace

void CertEntries::Validate() const {
  if (not_before >= not_after)
    throw Error(ErrorCode::kInvalidArgument, "not_before must precede not_after");
  if (subject.size() > wire::kMaxNameLength || issuer.size() > wire::kMaxNameLength)
    throw Error(ErrorCode::kEncodingLimit, "name longer than 65535 bytes");
  if (root_flag && !is_ca) throw Error(ErrorCode::kInvalidArgument, "a root must be a CA");
}

Bytes EncodeEntries(const CertEntries& entries) {
  if (entries.subject.size() > wire::kMaxNameLength ||
      entries.issuer.size() > wire::kMaxNameLength)
    throw Error(ErrorCode::kEncodingLimit, "name longer than 65535 bytes");
  wire::Writer w;
  WriteEntries(w, entries);
  return std::move(w).bytes();
}

CertEntries DecodeEntries(ByteView bytes) {
  wire::Reader r(bytes);
  CertEntries e = ReadEntries(r);
  r.Finish();
  return e;
}

Bytes PufCertificate::Encode() const {
  wire::Writer w;
  WriteEntries(w, entries);
  w.AddWord(wire::tag::kSig, sig);
  if (ext_rp) w.AddWord(wire::tag::kExtRp, *ext_rp);
  if (style != SigStyle::kPufSigned) w.AddU8(wire::tag::kSigStyle, uint8_t(style));
  return std::move(w).bytes();
}

PufCertificate PufCertificate::Decode(ByteView bytes) {
  wire::Reader r(bytes);
  PufCertificate c;
  c.entries = ReadEntries(r);
  c.sig = r.RequireWord(wire::tag::kSig);
  if (auto rp = r.Optional(wire::tag::kExtRp)) {
    if (rp->empty()) Malformed("empty ext_rp");
    c.ext_rp = Word::FromBytes(*rp);
  }
  if (auto style = r.Optional(wire::tag::kSigStyle)) {
    // Absence encodes the PUF style, so an explicit 0 is non-canonical.
    if (style->size() != 1 || (*style)[0] != uint8_t(SigStyle::kClassicSigned))
      Malformed("non-canonical signature style");
    c.style = SigStyle::kClassicSigned;
  }
  r.Finish();
  return c;
}

void CertChain::Validate() const {
  if (certs.empty()) Malformed("empty certificate chain");
  if (!certs[0].entries.root_flag) Malformed("chain does not start at a root");
  const size_t n = certs[0].sig.bits();
  for (size_t i = 0; i < certs.size(); ++i) {
    const PufCertificate& c = certs[i];
    if (c.sig.bits() != n) Malformed("level " + std::to_string(i) + " signature length differs");
    if (i == 0) {
      if (c.ext_rp) Malformed("root carries ext_rp");
      continue;
    }
    if (c.entries.root_flag) Malformed("root flag below level 0");
    if (c.entries.issuer != certs[i - 1].entries.subject)
      Malformed("level " + std::to_string(i) + " issuer does not match parent subject");
    if (!certs[i - 1].entries.is_ca) Malformed("level " + std::to_string(i - 1) + " is not a CA");
    if (c.style == SigStyle::kPufSigned && !c.ext_rp)
      Malformed("level " + std::to_string(i) + " lacks ext_rp");
    if (c.ext_rp && c.ext_rp->bits() != n)
      Malformed("level " + std::to_string(i) + " ext_rp length differs");
  }
}

Word ComputeHc(const CertEntries& entries, uint64_t ts, std::string_view issuer_name,
               size_t n_bits) {
  Bytes suffix;
  AppendU64(suffix, ts);
  if (issuer_name.size() > wire::kMaxNameLength)
    throw Error(ErrorCode::kEncodingLimit, "issuer name longer than 65535 bytes");
  wire::AppendRecord(suffix, wire::tag::kZCaName, AsBytes(issuer_name));
  return HashBits(n_bits, EncodeEntries(entries), suffix);
}

LevelSignature SignLevel(const Word& hc, const Word& response, const Word& issuer_response,
                         const Word& issuer_h) {
  RequireSameLength(hc, response, "response");
  RequireSameLength(hc, issuer_response, "issuer response");
  RequireSameLength(hc, issuer_h, "issuer hash pointer");
  Word h = HashBits(hc.bits(), issuer_response, hc, issuer_h);
  return {response ^ h, std::move(h)};
}

LevelSignature SignRoot(const Word& hc, const Word& response) {
  RequireSameLength(hc, response, "response");
  Word h = HashBits(hc.bits(), response, hc);
  return {response ^ h, std::move(h)};
}

IssuedCert RootSelfSign(CertEntries entries, uint64_t ts, puf::PufGroup& root_group) {
  if (!entries.root_flag)
    throw Error(ErrorCode::kInvalidArgument, "root entries need the root flag");
  entries.is_ca = true;
  entries.subject = root_group.ca_name();
  entries.issuer = root_group.ca_name();
  entries.subject_pk.assign(root_group.group_proof().bytes().begin(),
                            root_group.group_proof().bytes().end());
  entries.Validate();

  const puf::PufInstance& instance = root_group.SelectInstance();
  Word hc = ComputeHc(entries, ts, root_group.ca_name(), root_group.n_bits());
  Word response = instance.Evaluate(hc);
  LevelSignature s = SignRoot(hc, response);

  IssuedCert out;
  out.cert.entries = std::move(entries);
  out.cert.sig = std::move(s.sig);
  out.record = {ts,
                instance.id(),
                instance.manufacturer(),
                std::move(response),
                std::move(s.h),
                root_group.EnrolledIdentityResponse(instance.id()),
                root_group.group_proof()};
  return out;
}

IssuedCert IssueUnder(CertEntries entries, uint64_t ts, puf::PufGroup& issuer_group,
                      const Word& issuer_response, const Word& issuer_h) {
  entries.issuer = issuer_group.ca_name();
  entries.root_flag = false;
  entries.Validate();

  const puf::PufInstance& instance = issuer_group.SelectInstance();
  Word hc = ComputeHc(entries, ts, issuer_group.ca_name(), issuer_group.n_bits());
  Word response = instance.Evaluate(hc);
  LevelSignature s = SignLevel(hc, response, issuer_response, issuer_h);

  IssuedCert out;
  out.cert.entries = std::move(entries);
  out.cert.sig = std::move(s.sig);
  out.cert.ext_rp = issuer_group.EnrolledIdentityResponse(instance.id());
  out.record = {ts,
                instance.id(),
                instance.manufacturer(),
                std::move(response),
                std::move(s.h),
                *out.cert.ext_rp,
                issuer_group.group_proof()};
  return out;
}

Serial RandomSerial(Rng& rng) {
  Serial s{};
  Bytes raw = rng.RandomBytes(s.size());
  std::copy(raw.begin(), raw.end(), s.begin());
  return s;
}

BuiltChain BuildChain(puf::PufGroup& root_group, std::span<puf::PufGroup> intermediates,
                      const CertEntries& domain_entries,
                      const std::function<uint64_t()>& ts_source, Rng& rng,
                      const ChainOptions& options) {
  BuiltChain out;
  auto ca_entries = [&](const puf::PufGroup& subject, uint64_t ts) {
    CertEntries e;
    e.subject = subject.ca_name();
    e.serial = RandomSerial(rng);
    e.not_before = ts;
    e.not_after = ts + options.ca_validity_ms;
    e.subject_pk.assign(subject.group_proof().bytes().begin(),
                        subject.group_proof().bytes().end());
    e.is_ca = true;
    return e;
  };

  uint64_t ts = ts_source();
  CertEntries root = ca_entries(root_group, ts);
  root.root_flag = true;
  IssuedCert level = RootSelfSign(std::move(root), ts, root_group);
  out.chain.certs.push_back(level.cert);
  out.records.push_back(level.record);

  puf::PufGroup* issuer = &root_group;
  for (puf::PufGroup& group : intermediates) {
    ts = ts_source();
    const IssuanceRecord& above = out.records.back();
    level = IssueUnder(ca_entries(group, ts), ts, *issuer, above.response, above.h);
    out.chain.certs.push_back(level.cert);
    out.records.push_back(level.record);
    issuer = &group;
  }

  ts = ts_source();
  const IssuanceRecord& above = out.records.back();
  level = IssueUnder(domain_entries, ts, *issuer, above.response, above.h);
  out.chain.certs.push_back(level.cert);
  out.records.push_back(level.record);
  return out;
}

}  // namespace acore::cert
