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

#ifndef ACORE_CRYPTO_H_
#define ACORE_CRYPTO_H_

#include <array>
#include <cstdint>
#include <memory>
#include <random>

#include "acore/bytes.h"

namespace acore {

using Sha256Digest = std::array<uint8_t, 32>;

Sha256Digest Sha256(ByteView data);

// H(...) with an n-bit output. For n <= 256 the SHA-256 digest is truncated to
// its first n/8 bytes; for larger n the output is SHA-256(ctr || data) for
// ctr = 0, 1, ... (4-byte big-endian) concatenated and truncated.
class Hasher {
 public:
  explicit Hasher(size_t out_bits);
  ~Hasher();
  Hasher(const Hasher&) = delete;
  Hasher& operator=(const Hasher&) = delete;

  Hasher& Update(ByteView data);
  Hasher& Update(const Word& w) { return Update(w.bytes()); }
  Hasher& Update(uint8_t byte) { return Update(ByteView(&byte, 1)); }
  Word Finish();

 private:
  struct Impl;
  size_t out_bits_;
  std::unique_ptr<Impl> impl_;
};

template <typename... Parts>
Word HashBits(size_t out_bits, const Parts&... parts) {
  Hasher h(out_bits);
  (h.Update(parts), ...);
  return h.Finish();
}

// Deterministic generator used everywhere the simulation needs randomness, so
// that a fixed seed reproduces a run bit for bit.
class Rng {
 public:
  using result_type = uint64_t;

  explicit Rng(uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return engine_(); }

  // Uniform in [0, bound) by rejection; bound > 0.
  uint64_t Uniform(uint64_t bound);
  double UniformReal() { return double(engine_() >> 11) * 0x1.0p-53; }
  Bytes RandomBytes(size_t count);
  Word RandomWord(size_t bits) { return Word::FromBytes(RandomBytes(bits / 8)); }

  // Seeds derived from (base, index) are well separated; used to give each
  // Monte-Carlo trial its own stream independent of scheduling.
  static uint64_t Derive(uint64_t base, uint64_t index);

 private:
  std::mt19937_64 engine_;
};

uint64_t EntropySeed();

}  // namespace acore

#endif  // ACORE_CRYPTO_H_
