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

#ifndef ACORE_TRANSPORT_H_
#define ACORE_TRANSPORT_H_

#include <cstdint>
#include <functional>
#include <optional>

#include "acore/bytes.h"
#include "acore/log.h"
#include "acore/workflow.h"

namespace acore::wire {

// Request/response over length-prefixed frames, one TLV container each, no
// pipelining. Failures travel back as a status code plus message and are
// rethrown by the clients as Error.
enum class Op : uint8_t { kSubmit = 1, kGetProof = 2, kGetHead = 3, kValidateToken = 4 };

using Handler = std::function<Bytes(ByteView request)>;

class Transport {
 public:
  virtual ~Transport() = default;
  virtual Bytes RoundTrip(ByteView request) = 0;
};

// Frames every message as it would travel on a socket, then dispatches to
// |handler| directly.
class InProcessTransport : public Transport {
 public:
  explicit InProcessTransport(Handler handler) : handler_(std::move(handler)) {}
  Bytes RoundTrip(ByteView request) override;

 private:
  Handler handler_;
};

// Blocking client over a connected stream socket or pipe pair. Does not own
// the descriptor.
class StreamTransport : public Transport {
 public:
  explicit StreamTransport(int fd) : fd_(fd) {}
  Bytes RoundTrip(ByteView request) override;

 private:
  int fd_;
};

void WriteFrame(int fd, ByteView payload);
// nullopt on clean EOF before a header. Throws kFrameTooLarge before reading
// an oversized body, kIo on short reads.
std::optional<Bytes> ReadFrame(int fd);

// Answers frames on |fd| until the peer closes it.
void ServeStream(int fd, const Handler& handler);

class LogService {
 public:
  explicit LogService(pivlog::TransparencyLog& log) : log_(log) {}
  Bytes Handle(ByteView request);
  Handler AsHandler() {
    return [this](ByteView r) { return Handle(r); };
  }

 private:
  pivlog::TransparencyLog& log_;
};

class DomainService {
 public:
  explicit DomainService(workflow::DomainActor domain) : domain_(std::move(domain)) {}
  Bytes Handle(ByteView request);
  Handler AsHandler() {
    return [this](ByteView r) { return Handle(r); };
  }

 private:
  workflow::DomainActor domain_;
};

class LogClient {
 public:
  explicit LogClient(Transport& transport) : transport_(transport) {}

  pivlog::AppendResult Submit(std::string_view submitter, ByteView cert, ByteView piv);
  pivlog::LogProof InclusionProof(pivlog::TreeKind tree, uint64_t index,
                                  std::optional<uint64_t> tree_size = std::nullopt);
  pivlog::LogProof ConsistencyProof(pivlog::TreeKind tree, uint64_t old_size, uint64_t new_size);
  pivlog::SignedHead Head(pivlog::TreeKind tree);

 private:
  Transport& transport_;
};

class DomainClient {
 public:
  explicit DomainClient(Transport& transport) : transport_(transport) {}
  // Same contract as workflow::ValidateDomain.
  bool Validate(std::string_view domain, ByteView token);

 private:
  Transport& transport_;
};

}  // namespace acore::wire

#endif  // ACORE_TRANSPORT_H_
