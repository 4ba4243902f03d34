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

#include "acore/wire.h"

#include <openssl/evp.h>

#include <algorithm>

#include "acore/error.h"

namespace acore::wire {

namespace {

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformed, what);
}

std::string TagName(uint8_t tag) {
  static constexpr char kDigits[] = "0123456789abcdef";
  return std::string("0x") + kDigits[tag >> 4] + kDigits[tag & 0xf];
}

}  // namespace

void AppendRecord(Bytes& out, uint8_t tag, ByteView value) {
  if (value.size() > 0xFFFFFFFFu)
    throw Error(ErrorCode::kEncodingLimit, "record value exceeds 4 GiB");
  out.push_back(tag);
  AppendU32(out, uint32_t(value.size()));
  out.insert(out.end(), value.begin(), value.end());
}

Writer& Writer::Add(uint8_t tag, ByteView value) {
  if (int(tag) <= last_tag_)
    throw Error(ErrorCode::kInvalidArgument,
                "record " + TagName(tag) + " written out of canonical order");
  last_tag_ = tag;
  AppendRecord(out_, tag, value);
  return *this;
}

Writer& Writer::AddU8(uint8_t tag, uint8_t v) { return Add(tag, ByteView(&v, 1)); }

Writer& Writer::AddU64(uint8_t tag, uint64_t v) {
  Bytes buf;
  AppendU64(buf, v);
  return Add(tag, buf);
}

Writer& Writer::AddName(uint8_t tag, std::string_view name) {
  if (name.size() > kMaxNameLength)
    throw Error(ErrorCode::kEncodingLimit,
                "name of " + std::to_string(name.size()) + " bytes exceeds 65535");
  return Add(tag, AsBytes(name));
}

Writer& Writer::AddSequence(uint8_t tag, const std::vector<Bytes>& items) {
  Bytes seq;
  for (const Bytes& item : items) AppendRecord(seq, tag::kItem, item);
  return Add(tag, seq);
}

std::vector<Record> SplitRecords(ByteView data) {
  std::vector<Record> records;
  size_t pos = 0;
  while (pos < data.size()) {
    if (data.size() - pos < 5) Malformed("truncated record header");
    uint8_t t = data[pos];
    uint32_t len = ReadU32(data.subspan(pos + 1, 4));
    pos += 5;
    if (len > data.size() - pos) Malformed("record " + TagName(t) + " overruns container");
    records.push_back({t, data.subspan(pos, len)});
    pos += len;
  }
  return records;
}

Reader::Reader(ByteView data) : records_(SplitRecords(data)) {
  for (size_t i = 1; i < records_.size(); ++i) {
    if (records_[i].tag == records_[i - 1].tag)
      Malformed("duplicate record " + TagName(records_[i].tag));
    if (records_[i].tag < records_[i - 1].tag)
      Malformed("record " + TagName(records_[i].tag) + " out of order");
  }
  consumed_.assign(records_.size(), false);
}

bool Reader::Has(uint8_t t) const {
  return std::any_of(records_.begin(), records_.end(),
                     [t](const Record& r) { return r.tag == t; });
}

std::optional<ByteView> Reader::Optional(uint8_t t) {
  for (size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].tag == t) {
      consumed_[i] = true;
      return records_[i].value;
    }
  }
  return std::nullopt;
}

ByteView Reader::Require(uint8_t t) {
  auto v = Optional(t);
  if (!v) Malformed("missing record " + TagName(t));
  return *v;
}

uint8_t Reader::RequireU8(uint8_t t) {
  ByteView v = Require(t);
  if (v.size() != 1) Malformed("record " + TagName(t) + " must be 1 byte");
  return v[0];
}

uint64_t Reader::RequireU64(uint8_t t) {
  ByteView v = Require(t);
  if (v.size() != 8) Malformed("record " + TagName(t) + " must be 8 bytes");
  return ReadU64(v);
}

std::string Reader::RequireName(uint8_t t) {
  ByteView v = Require(t);
  if (v.size() > kMaxNameLength) Malformed("name too long");
  return std::string(v.begin(), v.end());
}

Word Reader::RequireWord(uint8_t t) {
  ByteView v = Require(t);
  if (v.empty()) Malformed("empty word in record " + TagName(t));
  return Word::FromBytes(v);
}

std::vector<ByteView> Reader::RequireSequence(uint8_t t) {
  return ParseSequence(Require(t));
}

void Reader::Finish() const {
  for (size_t i = 0; i < records_.size(); ++i)
    if (!consumed_[i]) Malformed("unknown record " + TagName(records_[i].tag));
}

std::vector<ByteView> ParseSequence(ByteView data) {
  std::vector<ByteView> items;
  for (const Record& r : SplitRecords(data)) {
    if (r.tag != tag::kItem) Malformed("sequence holds non-item record " + TagName(r.tag));
    items.push_back(r.value);
  }
  return items;
}

std::string Armor(std::string_view label, ByteView body) {
  std::string encoded(4 * ((body.size() + 2) / 3) + 1, '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(encoded.data()),
                          body.data(), int(body.size()));
  encoded.resize(size_t(n));
  std::string out = "-----BEGIN ACORE " + std::string(label) + "-----\n";
  for (size_t i = 0; i < encoded.size(); i += 64) {
    out += encoded.substr(i, 64);
    out += '\n';
  }
  out += "-----END ACORE " + std::string(label) + "-----\n";
  return out;
}

Bytes Dearmor(std::string_view label, std::string_view text) {
  std::string begin = "-----BEGIN ACORE " + std::string(label) + "-----";
  std::string end = "-----END ACORE " + std::string(label) + "-----";
  size_t b = text.find(begin);
  size_t e = text.find(end);
  if (b == std::string_view::npos || e == std::string_view::npos || e < b)
    Malformed("missing " + std::string(label) + " armor");
  std::string b64;
  for (char c : text.substr(b + begin.size(), e - b - begin.size()))
    if (c != '\n' && c != '\r' && c != ' ' && c != '\t') b64.push_back(c);
  if (b64.size() % 4 != 0) Malformed("base64 length not a multiple of 4");
  Bytes out(b64.size() / 4 * 3);
  int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(b64.data()),
                          int(b64.size()));
  if (n < 0) Malformed("invalid base64");
  size_t pad = 0;
  if (!b64.empty() && b64.back() == '=') ++pad;
  if (b64.size() > 1 && b64[b64.size() - 2] == '=') ++pad;
  out.resize(size_t(n) - pad);
  return out;
}

Bytes WrapFile(std::string_view magic, ByteView body) {
  Bytes out(magic.begin(), magic.end());
  out.push_back(kFormatVersion);
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

ByteView UnwrapFile(std::string_view magic, ByteView file) {
  if (file.size() < magic.size() + 1 ||
      !std::equal(magic.begin(), magic.end(), file.begin()))
    Malformed("bad magic, expected " + std::string(magic));
  if (file[magic.size()] != kFormatVersion)
    Malformed("unsupported format version " + std::to_string(file[magic.size()]));
  return file.subspan(magic.size() + 1);
}

Bytes EncodeFrame(ByteView payload) {
  if (payload.size() > kMaxFrameSize)
    throw Error(ErrorCode::kFrameTooLarge,
                std::to_string(payload.size()) + " byte frame exceeds 1 MiB");
  Bytes out;
  AppendU32(out, uint32_t(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

std::optional<Bytes> DecodeFrame(ByteView data, size_t* consumed) {
  if (data.size() < 4) return std::nullopt;
  uint32_t len = ReadU32(data);
  if (len > kMaxFrameSize)
    throw Error(ErrorCode::kFrameTooLarge,
                std::to_string(len) + " byte frame exceeds 1 MiB");
  if (data.size() - 4 < len) return std::nullopt;
  *consumed = 4 + size_t(len);
  return Bytes(data.begin() + 4, data.begin() + 4 + len);
}

}  // namespace acore::wire
