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

#include "acore/workflow.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "acore/error.h"
#include "acore/wire.h"

namespace acore::workflow {

namespace fs = std::filesystem;
using pivlog::TreeKind;

namespace {

constexpr std::string_view kTrustMagic = "ACTS";
constexpr std::string_view kCrlMagic = "ACRL";
constexpr std::string_view kCaMagic = "ACCA";

cert::Serial ReadSerial(ByteView v) {
  cert::Serial s;
  if (v.size() != s.size()) throw Error(ErrorCode::kMalformed, "serial must be 8 bytes");
  std::copy(v.begin(), v.end(), s.begin());
  return s;
}

VerificationReport Fail(VerificationReport report, FailingCheck check,
                        std::optional<size_t> level, std::string detail) {
  report.valid = false;
  report.failing_check = check;
  report.failing_level = level;
  report.detail = std::move(detail);
  return report;
}

Bytes ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

void WriteFile(const fs::path& path, ByteView data, bool secret = false) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
  out.close();
  if (secret)
    fs::permissions(path, fs::perms::owner_read | fs::perms::owner_write,
                    fs::perm_options::replace);
}

}  // namespace

// ---- TrustStore ----

void TrustStore::PinRoot(const cert::PufCertificate& root, const Word& root_h) {
  if (!root.entries.root_flag)
    throw Error(ErrorCode::kInvalidArgument, "only root certificates can be pinned");
  PinnedRoot pin{root.Fingerprint(), Word::FromBytes(root.entries.subject_pk), root_h};
  if (std::find(pins_.begin(), pins_.end(), pin) == pins_.end()) pins_.push_back(std::move(pin));
}

const PinnedRoot* TrustStore::FindPin(const Sha256Digest& cert_hash) const {
  for (const PinnedRoot& p : pins_)
    if (p.cert_hash == cert_hash) return &p;
  return nullptr;
}

void TrustStore::AddKnownHead(TreeKind tree, const pivlog::SignedHead& head) {
  (tree == TreeKind::kCert ? cert_heads_ : piv_heads_).insert(head.Encode());
}

bool TrustStore::KnowsHead(TreeKind tree, const pivlog::SignedHead& head) const {
  const auto& heads = tree == TreeKind::kCert ? cert_heads_ : piv_heads_;
  return heads.count(head.Encode()) != 0;
}

size_t TrustStore::known_head_count(TreeKind tree) const {
  return (tree == TreeKind::kCert ? cert_heads_ : piv_heads_).size();
}

Bytes TrustStore::Serialize() const {
  std::vector<Bytes> pins;
  for (const PinnedRoot& p : pins_) {
    wire::Writer w;
    w.Add(wire::tag::kPinCertHash, p.cert_hash)
        .AddWord(wire::tag::kPinPi, p.pi)
        .AddWord(wire::tag::kPinH, p.h);
    pins.push_back(std::move(w).bytes());
  }
  wire::Writer w;
  w.AddSequence(wire::tag::kPinnedRoots, pins)
      .AddSequence(wire::tag::kKnownCertHeads, {cert_heads_.begin(), cert_heads_.end()})
      .AddSequence(wire::tag::kKnownPivHeads, {piv_heads_.begin(), piv_heads_.end()});
  return wire::WrapFile(kTrustMagic, std::move(w).bytes());
}

TrustStore TrustStore::Deserialize(ByteView file) {
  wire::Reader r(wire::UnwrapFile(kTrustMagic, file));
  TrustStore store;
  for (ByteView item : r.RequireSequence(wire::tag::kPinnedRoots)) {
    wire::Reader pr(item);
    PinnedRoot p;
    ByteView hash = pr.Require(wire::tag::kPinCertHash);
    if (hash.size() != p.cert_hash.size())
      throw Error(ErrorCode::kMalformed, "pinned hash must be 32 bytes");
    std::copy(hash.begin(), hash.end(), p.cert_hash.begin());
    p.pi = pr.RequireWord(wire::tag::kPinPi);
    p.h = pr.RequireWord(wire::tag::kPinH);
    pr.Finish();
    store.pins_.push_back(std::move(p));
  }
  for (ByteView item : r.RequireSequence(wire::tag::kKnownCertHeads))
    store.AddKnownHead(TreeKind::kCert, pivlog::SignedHead::Decode(item));
  for (ByteView item : r.RequireSequence(wire::tag::kKnownPivHeads))
    store.AddKnownHead(TreeKind::kPiv, pivlog::SignedHead::Decode(item));
  r.Finish();
  return store;
}

// ---- RevocationList ----

void RevocationList::RevokeSerial(const std::string& issuer, const cert::Serial& serial) {
  serials_.emplace(issuer, serial);
}

bool RevocationList::IsRevoked(const std::string& issuer, const cert::Serial& serial) const {
  return serials_.count({issuer, serial}) != 0;
}

void RevocationList::RevokeInstance(const std::string& instance_id, uint64_t since) {
  auto [it, inserted] = instances_.emplace(instance_id, since);
  if (!inserted) it->second = std::min(it->second, since);
}

bool RevocationList::IsInstanceRevoked(const std::string& instance_id) const {
  return instances_.count(instance_id) != 0;
}

Bytes RevocationList::Serialize() const {
  std::vector<Bytes> serials;
  for (const auto& [issuer, serial] : serials_) {
    wire::Writer w;
    w.AddName(wire::tag::kRevokedIssuer, issuer).Add(wire::tag::kRevokedSerial, serial);
    serials.push_back(std::move(w).bytes());
  }
  std::vector<Bytes> instances;
  for (const auto& [id, since] : instances_) {
    wire::Writer w;
    w.AddName(wire::tag::kRevokedInstanceId, id).AddU64(wire::tag::kRevokedSince, since);
    instances.push_back(std::move(w).bytes());
  }
  wire::Writer w;
  w.AddSequence(wire::tag::kRevokedSerials, serials)
      .AddSequence(wire::tag::kRevokedInstances, instances);
  return wire::WrapFile(kCrlMagic, std::move(w).bytes());
}

RevocationList RevocationList::Deserialize(ByteView file) {
  wire::Reader r(wire::UnwrapFile(kCrlMagic, file));
  RevocationList crl;
  for (ByteView item : r.RequireSequence(wire::tag::kRevokedSerials)) {
    wire::Reader sr(item);
    std::string issuer = sr.RequireName(wire::tag::kRevokedIssuer);
    cert::Serial serial = ReadSerial(sr.Require(wire::tag::kRevokedSerial));
    sr.Finish();
    crl.serials_.emplace(std::move(issuer), serial);
  }
  for (ByteView item : r.RequireSequence(wire::tag::kRevokedInstances)) {
    wire::Reader ir(item);
    std::string id = ir.RequireName(wire::tag::kRevokedInstanceId);
    uint64_t since = ir.RequireU64(wire::tag::kRevokedSince);
    ir.Finish();
    crl.instances_.emplace(std::move(id), since);
  }
  r.Finish();
  return crl;
}

// ---- Verification ----

std::string_view CheckName(FailingCheck check) {
  switch (check) {
    case FailingCheck::kRootPin: return "root-pin";
    case FailingCheck::kHcRecompute: return "hc-recompute";
    case FailingCheck::kInclusionProof: return "inclusion-proof";
    case FailingCheck::kTagMismatch: return "tag-mismatch";
    case FailingCheck::kLogProof: return "log-proof";
    case FailingCheck::kExpiry: return "expiry";
    case FailingCheck::kRevoked: return "revoked";
    case FailingCheck::kMalformed: return "malformed";
    case FailingCheck::kUnsupported: return "unsupported";
  }
  return "unknown";
}

std::string VerificationReport::Summary() const {
  if (valid) return "valid";
  std::ostringstream out;
  out << "invalid: " << CheckName(*failing_check);
  if (failing_level) out << " at level " << *failing_level;
  if (!detail.empty()) out << " (" << detail << ")";
  return out.str();
}

VerificationReport VerifySignatureChain(const cert::CertChain& chain,
                                        const pivlog::PivChain& pivs, const TrustStore& store) {
  VerificationReport report;
  const auto& certs = chain.certs;
  if (certs.empty())
    return Fail(std::move(report), FailingCheck::kMalformed, std::nullopt, "empty chain");
  if (pivs.size() != certs.size())
    return Fail(std::move(report), FailingCheck::kMalformed, std::nullopt,
                "certificate and PIV chains differ in length");
  for (size_t i = 0; i < certs.size(); ++i)
    if (certs[i].style != cert::SigStyle::kPufSigned)
      return Fail(std::move(report), FailingCheck::kUnsupported, i,
                  "classically signed level in a PUF chain");

  const size_t n = certs[0].sig.bits();
  Word r_last, h_last, pi_last;
  Word t_last = pivlog::RootTagSentinel(n);

  for (size_t i = 0; i < certs.size(); ++i) {
    const cert::PufCertificate& c = certs[i];
    const pivlog::Piv& z = pivs.pivs[i];

    if (c.sig.bits() != n || z.z_rp_complement.bits() != n || z.tag.bits() != n)
      return Fail(std::move(report), FailingCheck::kMalformed, i, "field length differs from n");
    if (i == 0) {
      if (!c.entries.root_flag || c.ext_rp || c.entries.issuer != c.entries.subject)
        return Fail(std::move(report), FailingCheck::kMalformed, i, "not a self-issued root");
    } else {
      if (c.entries.root_flag)
        return Fail(std::move(report), FailingCheck::kMalformed, i, "root flag below the root");
      if (!c.ext_rp) return Fail(std::move(report), FailingCheck::kMalformed, i, "missing ext_rp");
      if (c.ext_rp->bits() != n)
        return Fail(std::move(report), FailingCheck::kMalformed, i, "ext_rp length differs");
      if (c.entries.issuer != certs[i - 1].entries.subject)
        return Fail(std::move(report), FailingCheck::kMalformed, i, "issuer breaks the chain");
    }
    if (i + 1 < certs.size() &&
        (!c.entries.is_ca || c.entries.subject_pk.size() * 8 != n))
      return Fail(std::move(report), FailingCheck::kMalformed, i, "issuing level is not a PUF CA");

    Word hc = cert::ComputeHc(c.entries, z.z_ts, z.z_ca_name, n);
    Word h, r;
    if (i == 0) {
      const PinnedRoot* pin = store.FindPin(c.Fingerprint());
      if (!pin) return Fail(std::move(report), FailingCheck::kRootPin, i, "root not pinned");
      if (pin->h.bits() != n || pin->pi != Word::FromBytes(c.entries.subject_pk))
        return Fail(std::move(report), FailingCheck::kRootPin, i, "pinned root data mismatch");
      h = pin->h;
      r = h ^ c.sig;
      if (HashBits(n, r, hc) != h)
        return Fail(std::move(report), FailingCheck::kHcRecompute, i,
                    "H(R || hc) differs from the pinned h");
    } else {
      h = HashBits(n, r_last, hc, h_last);
      if ((*c.ext_rp ^ z.z_rp_complement) != pi_last)
        return Fail(std::move(report), FailingCheck::kInclusionProof, i,
                    "RP xor complement differs from the issuer's pi");
      r = h ^ c.sig;
    }
    Word t = pivlog::ComputePivTag(r, z.EncodeZ(), c.Encode(), t_last);
    report.recovered_responses.push_back(r);
    if (t != z.tag)
      return Fail(std::move(report), FailingCheck::kTagMismatch, i, "recomputed PIV tag differs");

    r_last = std::move(r);
    h_last = std::move(h);
    t_last = z.tag;
    if (c.entries.subject_pk.size() * 8 == n) pi_last = Word::FromBytes(c.entries.subject_pk);
  }
  report.valid = true;
  return report;
}

VerificationReport VerifyBundle(const pivlog::StapledBundle& bundle, const TrustStore& store,
                                uint64_t now, const RevocationList& crl) {
  VerificationReport report;
  try {
    report = VerifySignatureChain(bundle.cert_chain, bundle.piv_chain, store);
  } catch (const Error& e) {
    return Fail(std::move(report), FailingCheck::kMalformed, std::nullopt, e.what());
  }
  if (!report.valid) return report;
  report.valid = false;

  const auto& certs = bundle.cert_chain.certs;
  const size_t levels = certs.size();
  if (bundle.cert_proofs.size() != levels || bundle.piv_proofs.size() != levels)
    return Fail(std::move(report), FailingCheck::kLogProof, std::nullopt,
                "missing proof: " + std::to_string(bundle.cert_proofs.size()) + " cert and " +
                    std::to_string(bundle.piv_proofs.size()) + " PIV proofs for " +
                    std::to_string(levels) + " levels");
  if (!store.KnowsHead(TreeKind::kCert, bundle.cert_head))
    return Fail(std::move(report), FailingCheck::kLogProof, std::nullopt,
                "certificate tree head unknown to the trust store");
  if (!store.KnowsHead(TreeKind::kPiv, bundle.piv_head))
    return Fail(std::move(report), FailingCheck::kLogProof, std::nullopt,
                "PIV tree head unknown to the trust store");
  for (size_t i = 0; i < levels; ++i) {
    const pivlog::LogProof& cp = bundle.cert_proofs[i];
    const pivlog::LogProof& pp = bundle.piv_proofs[i];
    if (cp.head != bundle.cert_head || pp.head != bundle.piv_head)
      return Fail(std::move(report), FailingCheck::kLogProof, i, "proof anchored to another head");
    if (cp.leaf_index != pp.leaf_index)
      return Fail(std::move(report), FailingCheck::kLogProof, i, "cert and PIV leaves misaligned");
    if (!pivlog::VerifyInclusionProof(cp, certs[i].Encode()))
      return Fail(std::move(report), FailingCheck::kLogProof, i, "certificate inclusion fails");
    if (!pivlog::VerifyInclusionProof(pp, bundle.piv_chain.pivs[i].Encode()))
      return Fail(std::move(report), FailingCheck::kLogProof, i, "PIV inclusion fails");
  }
  for (size_t i = 0; i < levels; ++i) {
    const cert::CertEntries& e = certs[i].entries;
    if (now < e.not_before || now > e.not_after)
      return Fail(std::move(report), FailingCheck::kExpiry, i, "outside validity window");
  }
  for (size_t i = 0; i < levels; ++i) {
    const cert::CertEntries& e = certs[i].entries;
    if (crl.IsRevoked(e.issuer, e.serial))
      return Fail(std::move(report), FailingCheck::kRevoked, i, "serial on the CRL");
  }
  report.valid = true;
  return report;
}

VerificationReport VerifyBundleBytes(ByteView bundle, const TrustStore& store, uint64_t now,
                                     const RevocationList& crl) {
  pivlog::StapledBundle decoded;
  try {
    decoded = pivlog::StapledBundle::Decode(bundle);
  } catch (const Error& e) {
    return Fail({}, FailingCheck::kMalformed, std::nullopt, e.what());
  }
  return VerifyBundle(decoded, store, now, crl);
}

// ---- Domain validation ----

Bytes DomainActor::Respond(ByteView token) const {
  switch (behavior) {
    case Behavior::kEcho:
      return {token.begin(), token.end()};
    case Behavior::kWrongToken: {
      Bytes wrong(token.begin(), token.end());
      if (wrong.empty()) wrong.push_back(0);
      wrong[0] ^= 0xFF;
      return wrong;
    }
    case Behavior::kUnresponsive:
      break;
  }
  throw Error(ErrorCode::kValidationFailed, "domain " + name + " did not answer the challenge");
}

bool ValidateDomain(const DomainActor& domain, ByteView token) {
  Bytes answer = domain.Respond(token);
  return std::equal(answer.begin(), answer.end(), token.begin(), token.end());
}

// ---- CaState ----

bool CaState::HasSerial(const cert::Serial& serial) const {
  return std::any_of(issued.begin(), issued.end(),
                     [&](const IssuedRecord& r) { return r.serial == serial; });
}

Bytes CaState::Serialize() const {
  std::vector<Bytes> certs, piv_items, records;
  for (const auto& c : chain.certs) certs.push_back(c.Encode());
  for (const auto& p : pivs.pivs) piv_items.push_back(p.Encode());
  for (const IssuedRecord& r : issued) {
    wire::Writer w;
    w.Add(wire::tag::kIssuedSerial, r.serial)
        .AddU64(wire::tag::kIssuedTs, r.ts)
        .AddName(wire::tag::kIssuedInstance, r.instance_id)
        .AddName(wire::tag::kIssuedSubject, r.subject);
    records.push_back(std::move(w).bytes());
  }
  wire::Writer w;
  w.AddName(wire::tag::kCaName, name)
      .AddName(wire::tag::kCaParent, parent)
      .AddSequence(wire::tag::kCaCert, certs)
      .AddSequence(wire::tag::kCaPiv, piv_items)
      .AddWord(wire::tag::kCaResponse, response)
      .AddWord(wire::tag::kCaHashPointer, h)
      .AddSequence(wire::tag::kCaIssued, records);
  return wire::WrapFile(kCaMagic, std::move(w).bytes());
}

CaState CaState::Deserialize(ByteView file, puf::PufGroup group) {
  wire::Reader r(wire::UnwrapFile(kCaMagic, file));
  std::string name = r.RequireName(wire::tag::kCaName);
  std::string parent = r.RequireName(wire::tag::kCaParent);
  cert::CertChain chain;
  for (ByteView c : r.RequireSequence(wire::tag::kCaCert))
    chain.certs.push_back(cert::PufCertificate::Decode(c));
  pivlog::PivChain pivs;
  for (ByteView p : r.RequireSequence(wire::tag::kCaPiv)) pivs.pivs.push_back(pivlog::Piv::Decode(p));
  Word response = r.RequireWord(wire::tag::kCaResponse);
  Word h = r.RequireWord(wire::tag::kCaHashPointer);
  std::vector<IssuedRecord> issued;
  for (ByteView item : r.RequireSequence(wire::tag::kCaIssued)) {
    wire::Reader ir(item);
    IssuedRecord rec;
    rec.serial = ReadSerial(ir.Require(wire::tag::kIssuedSerial));
    rec.ts = ir.RequireU64(wire::tag::kIssuedTs);
    rec.instance_id = ir.RequireName(wire::tag::kIssuedInstance);
    rec.subject = ir.RequireName(wire::tag::kIssuedSubject);
    ir.Finish();
    issued.push_back(std::move(rec));
  }
  r.Finish();
  if (group.ca_name() != name)
    throw Error(ErrorCode::kMalformed, "group " + group.ca_name() + " does not belong to " + name);
  return CaState{std::move(name), std::move(parent), std::move(group), std::move(chain),
                 std::move(pivs), std::move(response), std::move(h), std::move(issued)};
}

// ---- Simulation ----

Simulation::Simulation(SimConfig config)
    : config_(std::move(config)),
      sim_now_(std::make_shared<uint64_t>(kSimEpoch)),
      rng_(config_.seed) {
  config_.params.Validate();
  if (!config_.clock) {
    simulated_clock_ = true;
    auto now = sim_now_;
    config_.clock = [now] { return ++*now; };
  }
  log_ = std::make_unique<pivlog::TransparencyLog>(config_.params.n_bits, rng_.RandomBytes(32),
                                                   config_.clock);
}

uint64_t Simulation::Now() const { return simulated_clock_ ? *sim_now_ : config_.clock(); }

uint64_t Simulation::Tick() { return config_.clock(); }

cert::CertEntries Simulation::CaEntries(const puf::PufGroup& subject, uint64_t ts) {
  cert::CertEntries e;
  e.subject = subject.ca_name();
  e.serial = cert::RandomSerial(rng_);
  e.not_before = ts;
  e.not_after = ts + config_.ca_validity_ms;
  e.subject_pk.assign(subject.group_proof().bytes().begin(), subject.group_proof().bytes().end());
  e.is_ca = true;
  return e;
}

void Simulation::RecordHeads(const pivlog::AppendResult& appended) {
  store_.AddKnownHead(TreeKind::kCert, appended.cert_head);
  store_.AddKnownHead(TreeKind::kPiv, appended.piv_head);
}

void Simulation::InitRoot(const std::string& name, size_t m) {
  if (!ca_order_.empty()) throw Error(ErrorCode::kInvalidArgument, "root already initialized");
  puf::PufGroup group = puf::PufGroup::Create(name, m, config_.params, rng_, config_.manufacturer);
  uint64_t ts = Tick();
  cert::CertEntries entries = CaEntries(group, ts);
  entries.root_flag = true;
  cert::IssuedCert root = cert::RootSelfSign(std::move(entries), ts, group);
  pivlog::Piv piv =
      pivlog::MakePiv(root.record, group, root.cert, pivlog::RootTagSentinel(group.n_bits()));

  log_->Authorize(name);
  RecordHeads(log_->Append(name, root.cert.Encode(), piv.Encode()));
  store_.PinRoot(root.cert, root.record.h);

  CaState state{name, "", std::move(group), {{root.cert}}, {{piv}}, root.record.response,
                root.record.h, {}};
  state.issued.push_back({root.cert.entries.serial, ts, root.record.instance_id, name});
  cas_.emplace(name, std::move(state));
  ca_order_.push_back(name);
}

const CaState& Simulation::CreateCa(const std::string& parent, const std::string& name, size_t m) {
  if (!cas_.count(parent)) throw Error(ErrorCode::kUnknownMember, "unknown parent CA " + parent);
  if (cas_.count(name)) throw Error(ErrorCode::kDuplicateMember, "CA " + name + " already exists");
  puf::PufGroup group = puf::PufGroup::Create(name, m, config_.params, rng_, config_.manufacturer);
  log_->Authorize(name);
  IssueResult issued = Issue(parent, CaEntries(group, Now()));
  CaState state{name, parent, std::move(group), std::move(issued.chain), std::move(issued.pivs),
                std::move(issued.record.response), std::move(issued.record.h), {}};
  ca_order_.push_back(name);
  CaState& self = cas_.emplace(name, std::move(state)).first->second;
  return self;
}

IssueResult Simulation::Issue(const std::string& ca_name, cert::CertEntries entries) {
  CaState& issuer = ca(ca_name);
  if (!log_->IsAuthorized(ca_name))
    throw Error(ErrorCode::kUnauthorized, "CA " + ca_name + " is not authorized by the log");
  if (issuer.HasSerial(entries.serial))
    throw Error(ErrorCode::kDuplicateSerial, "serial already issued by " + ca_name);
  const uint64_t ts = Tick();
  if (entries.not_before == 0 && entries.not_after == 0) {
    entries.not_before = ts;
    entries.not_after = ts + config_.domain_validity_ms;
  }
  auto t0 = std::chrono::steady_clock::now();
  cert::IssuedCert out = cert::IssueUnder(std::move(entries), ts, issuer.group, issuer.response,
                                          issuer.h);
  pivlog::Piv piv = pivlog::MakePiv(out.record, issuer.group, out.cert, issuer.pivs.pivs.back().tag);
  auto t1 = std::chrono::steady_clock::now();
  pivlog::AppendResult appended = log_->Append(ca_name, out.cert.Encode(), piv.Encode());
  auto t2 = std::chrono::steady_clock::now();
  RecordHeads(appended);
  issuer.issued.push_back({out.cert.entries.serial, ts, out.record.instance_id,
                           out.cert.entries.subject});

  IssueResult result;
  result.cert = out.cert;
  result.piv = piv;
  result.leaf_index = appended.leaf_index;
  result.record = out.record;
  result.sign_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  result.log_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  result.chain = issuer.chain;
  result.chain.certs.push_back(std::move(out.cert));
  result.pivs = issuer.pivs;
  result.pivs.pivs.push_back(std::move(piv));
  return result;
}

IssueResult Simulation::IssueDomain(const std::string& ca_name, const DomainActor& domain,
                                    std::optional<Bytes> subject_pk) {
  Bytes token = rng_.RandomBytes(16);
  if (!ValidateDomain(domain, token))
    throw Error(ErrorCode::kValidationFailed, "domain " + domain.name + " returned a wrong token");
  cert::CertEntries e;
  e.subject = domain.name;
  do {
    e.serial = cert::RandomSerial(rng_);
  } while (ca(ca_name).HasSerial(e.serial));
  e.subject_pk = subject_pk ? std::move(*subject_pk) : rng_.RandomBytes(32);
  return Issue(ca_name, std::move(e));
}

pivlog::StapledBundle Simulation::BundleFor(const IssueResult& issued) const {
  return BundleFor(issued.chain, issued.pivs);
}

pivlog::StapledBundle Simulation::BundleFor(const cert::CertChain& chain,
                                            const pivlog::PivChain& pivs) const {
  return pivlog::BuildBundle(*log_, chain, pivs);
}

VerificationReport Simulation::Verify(const pivlog::StapledBundle& bundle) const {
  return VerifyBundle(bundle, store_, Now(), crl_);
}

void Simulation::Revoke(const std::string& issuer, const cert::Serial& serial) {
  crl_.RevokeSerial(issuer, serial);
}

void Simulation::RevokeInstance(const std::string& ca_name, const std::string& instance_id,
                                uint64_t since) {
  CaState& state = ca(ca_name);
  state.group.RemoveInstance(instance_id, puf::InstanceStatus::kFailed);
  crl_.RevokeInstance(instance_id, since);
  for (const IssuedRecord& rec : state.issued)
    if (rec.instance_id == instance_id && rec.ts >= since && rec.subject != ca_name)
      crl_.RevokeSerial(ca_name, rec.serial);
  if (state.group.active_count() > 0) ReissueCa(ca_name);
}

void Simulation::ReissueCa(const std::string& name) {
  CaState& state = ca(name);
  if (state.is_root()) {
    uint64_t ts = Tick();
    cert::CertEntries entries = CaEntries(state.group, ts);
    entries.root_flag = true;
    cert::IssuedCert root = cert::RootSelfSign(std::move(entries), ts, state.group);
    pivlog::Piv piv = pivlog::MakePiv(root.record, state.group, root.cert,
                                      pivlog::RootTagSentinel(state.group.n_bits()));
    RecordHeads(log_->Append(name, root.cert.Encode(), piv.Encode()));
    store_.PinRoot(root.cert, root.record.h);
    state.issued.push_back({root.cert.entries.serial, ts, root.record.instance_id, name});
    state.chain = {{root.cert}};
    state.pivs = {{piv}};
    state.response = root.record.response;
    state.h = root.record.h;
  } else {
    IssueResult issued = Issue(state.parent, CaEntries(state.group, Now()));
    state.response = std::move(issued.record.response);
    state.h = std::move(issued.record.h);
    state.chain = std::move(issued.chain);
    state.pivs = std::move(issued.pivs);
  }
  for (const std::string& child : ca_order_)
    if (ca(child).parent == name && ca(child).group.active_count() > 0) ReissueCa(child);
}

void Simulation::ForgetAllSeeds() {
  for (auto& [name, state] : cas_) state.group.ForgetSeeds();
}

CaState& Simulation::ca(const std::string& name) {
  auto it = cas_.find(name);
  if (it == cas_.end()) throw Error(ErrorCode::kUnknownMember, "unknown CA " + name);
  return it->second;
}

const CaState& Simulation::ca(const std::string& name) const {
  auto it = cas_.find(name);
  if (it == cas_.end()) throw Error(ErrorCode::kUnknownMember, "unknown CA " + name);
  return it->second;
}

Simulation Simulation::Bootstrap(const std::string& root_name, size_t M, const std::string& domain,
                                 size_t m, SimConfig config) {
  if (m == 0) throw Error(ErrorCode::kInvalidArgument, "m must be at least 1");
  Simulation sim(std::move(config));
  sim.InitRoot(root_name, m);
  for (size_t i = 1; i <= M; ++i)
    sim.CreateCa(sim.lowest_ca(), root_name + "-ca" + std::to_string(i), m);
  if (!domain.empty()) sim.first_issue_ = sim.IssueDomain(sim.lowest_ca(), domain);
  return sim;
}

void Simulation::Save(const fs::path& dir) const {
  fs::create_directories(dir / "ca");
  WriteFile(dir / "trust.acts", store_.Serialize());
  WriteFile(dir / "crl.acrl", crl_.Serialize());
  WriteFile(dir / "log.aclg", log_->Serialize(), true);
  std::string order;
  for (const std::string& name : ca_order_) {
    const CaState& state = cas_.at(name);
    WriteFile(dir / "ca" / (name + ".acca"), state.Serialize());
    WriteFile(dir / "ca" / (name + ".acpg"), state.group.Serialize(), true);
    order += name + "\n";
  }
  WriteFile(dir / "cas.order", AsBytes(order));
}

Simulation Simulation::Load(const fs::path& dir, SimConfig config) {
  Simulation sim(std::move(config));
  sim.store_ = TrustStore::Deserialize(ReadFile(dir / "trust.acts"));
  sim.crl_ = RevocationList::Deserialize(ReadFile(dir / "crl.acrl"));
  sim.log_ = std::make_unique<pivlog::TransparencyLog>(
      pivlog::TransparencyLog::Deserialize(ReadFile(dir / "log.aclg"), sim.config_.clock));
  if (sim.simulated_clock_ && sim.log_->size() > 0)
    *sim.sim_now_ = std::max(*sim.sim_now_, sim.log_->record(sim.log_->size() - 1).arrival);
  if (!fs::exists(dir / "cas.order")) return sim;
  Bytes order = ReadFile(dir / "cas.order");
  std::istringstream names(std::string(order.begin(), order.end()));
  for (std::string name; std::getline(names, name);) {
    if (name.empty()) continue;
    puf::PufGroup group =
        puf::PufGroup::Deserialize(ReadFile(dir / "ca" / (name + ".acpg")), sim.config_.params);
    sim.cas_.emplace(name,
                     CaState::Deserialize(ReadFile(dir / "ca" / (name + ".acca")), std::move(group)));
    sim.ca_order_.push_back(name);
  }
  return sim;
}

}  // namespace acore::workflow
