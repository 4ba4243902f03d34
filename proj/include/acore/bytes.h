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

#ifndef ACORE_BYTES_H_
#define ACORE_BYTES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace acore {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

inline ByteView AsBytes(std::string_view s) {
  return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

std::string ToHex(ByteView bytes);
// Throws Error(kInvalidArgument) on odd length or non-hex characters.
Bytes FromHex(std::string_view hex);

void AppendU64(Bytes& out, uint64_t v);
void AppendU32(Bytes& out, uint32_t v);
uint64_t ReadU64(ByteView in);
uint32_t ReadU32(ByteView in);

// An n-bit value (n a positive multiple of 8): PUF challenges and responses,
// hash outputs, chained signatures, group proofs and log node hashes.
class Word {
 public:
  Word() = default;
  // All-zero word of |bits| bits.
  explicit Word(size_t bits);
  static Word FromBytes(ByteView bytes);
  static Word FromHex(std::string_view hex);

  size_t bits() const { return bytes_.size() * 8; }
  size_t size() const { return bytes_.size(); }
  bool empty() const { return bytes_.empty(); }
  ByteView bytes() const { return bytes_; }
  uint8_t* data() { return bytes_.data(); }
  const uint8_t* data() const { return bytes_.data(); }

  bool Bit(size_t i) const { return (bytes_[i / 8] >> (7 - i % 8)) & 1; }
  void FlipBit(size_t i) { bytes_[i / 8] ^= uint8_t(0x80 >> (i % 8)); }
  bool IsZero() const;
  size_t PopCount() const;
  std::string Hex() const { return ToHex(bytes_); }

  // Lengths must match; throws Error(kInvalidArgument) otherwise.
  Word& operator^=(const Word& other);
  friend Word operator^(Word a, const Word& b) { return a ^= b; }
  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  Bytes bytes_;
};

size_t HammingDistance(const Word& a, const Word& b);

}  // namespace acore

#endif  // ACORE_BYTES_H_
