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

#include "acore/bytes.h"

#include <bit>

#include "acore/error.h"

namespace acore {

std::string ToHex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

namespace {

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Bytes FromHex(std::string_view hex) {
  if (hex.size() % 2 != 0)
    throw Error(ErrorCode::kInvalidArgument, "odd-length hex string");
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    int hi = HexValue(hex[2 * i]);
    int lo = HexValue(hex[2 * i + 1]);
    if (hi < 0 || lo < 0)
      throw Error(ErrorCode::kInvalidArgument, "invalid hex digit");
    out[i] = uint8_t(hi << 4 | lo);
  }
  return out;
}

void AppendU64(Bytes& out, uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(uint8_t(v >> shift));
}

void AppendU32(Bytes& out, uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(uint8_t(v >> shift));
}

uint64_t ReadU64(ByteView in) {
  uint64_t v = 0;
  for (size_t i = 0; i < 8; ++i) v = v << 8 | in[i];
  return v;
}

uint32_t ReadU32(ByteView in) {
  uint32_t v = 0;
  for (size_t i = 0; i < 4; ++i) v = v << 8 | in[i];
  return v;
}

Word::Word(size_t bits) {
  if (bits == 0 || bits % 8 != 0)
    throw Error(ErrorCode::kInvalidArgument,
                "word length must be a positive multiple of 8 bits");
  bytes_.assign(bits / 8, 0);
}

Word Word::FromBytes(ByteView bytes) {
  Word w;
  w.bytes_.assign(bytes.begin(), bytes.end());
  return w;
}

Word Word::FromHex(std::string_view hex) { return FromBytes(acore::FromHex(hex)); }

bool Word::IsZero() const {
  for (uint8_t b : bytes_)
    if (b) return false;
  return true;
}

size_t Word::PopCount() const {
  size_t count = 0;
  for (uint8_t b : bytes_) count += std::popcount(b);
  return count;
}

Word& Word::operator^=(const Word& other) {
  if (other.bytes_.size() != bytes_.size())
    throw Error(ErrorCode::kInvalidArgument, "XOR of words with different lengths");
  for (size_t i = 0; i < bytes_.size(); ++i) bytes_[i] ^= other.bytes_[i];
  return *this;
}

size_t HammingDistance(const Word& a, const Word& b) { return (a ^ b).PopCount(); }

}  // namespace acore
