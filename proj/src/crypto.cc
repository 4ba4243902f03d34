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

#include "acore/crypto.h"

#include <openssl/evp.h>

#include <random>
#include <vector>

#include "acore/error.h"

namespace acore {

Sha256Digest Sha256(ByteView data) {
  Sha256Digest out;
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(),
                  nullptr))
    throw Error(ErrorCode::kInvalidArgument, "SHA-256 failed");
  return out;
}

struct Hasher::Impl {
  std::vector<EVP_MD_CTX*> blocks;

  ~Impl() {
    for (EVP_MD_CTX* ctx : blocks) EVP_MD_CTX_free(ctx);
  }
};

Hasher::Hasher(size_t out_bits) : out_bits_(out_bits), impl_(new Impl) {
  if (out_bits == 0 || out_bits % 8 != 0)
    throw Error(ErrorCode::kInvalidArgument,
                "hash output length must be a positive multiple of 8 bits");
  size_t block_count = (out_bits + 255) / 256;
  for (size_t i = 0; i < block_count; ++i) {
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    impl_->blocks.push_back(ctx);
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    if (block_count > 1) {
      Bytes ctr;
      AppendU32(ctr, uint32_t(i));
      EVP_DigestUpdate(ctx, ctr.data(), ctr.size());
    }
  }
}

Hasher::~Hasher() = default;

Hasher& Hasher::Update(ByteView data) {
  for (EVP_MD_CTX* ctx : impl_->blocks) EVP_DigestUpdate(ctx, data.data(), data.size());
  return *this;
}

Word Hasher::Finish() {
  Bytes out;
  out.reserve(impl_->blocks.size() * 32);
  for (EVP_MD_CTX* ctx : impl_->blocks) {
    uint8_t digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    out.insert(out.end(), digest, digest + len);
  }
  out.resize(out_bits_ / 8);
  return Word::FromBytes(out);
}

uint64_t Rng::Uniform(uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "empty range");
  // Largest multiple of bound representable; reject the tail.
  uint64_t limit = max() - max() % bound;
  for (;;) {
    uint64_t v = engine_();
    if (v < limit) return v % bound;
  }
}

Bytes Rng::RandomBytes(size_t count) {
  Bytes out(count);
  for (size_t i = 0; i < count; i += 8) {
    uint64_t v = engine_();
    for (size_t j = 0; j < 8 && i + j < count; ++j) out[i + j] = uint8_t(v >> (8 * j));
  }
  return out;
}

uint64_t Rng::Derive(uint64_t base, uint64_t index) {
  // splitmix64 finalizer over a mixed input
  uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t EntropySeed() {
  std::random_device rd;
  return uint64_t(rd()) << 32 | rd();
}

}  // namespace acore
