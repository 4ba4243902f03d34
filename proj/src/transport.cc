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

#include "acore/transport.h"

#include <cerrno>
#include <cstring>
#include <unistd.h>

#include "acore/error.h"
#include "acore/wire.h"

namespace acore::wire {

namespace {

constexpr uint8_t kStatusOk = 0;

Bytes ErrorResponse(const Error& e) {
  std::string_view msg = e.what();
  std::string_view prefix = ErrorCodeName(e.code());
  if (msg.substr(0, prefix.size()) == prefix && msg.substr(prefix.size(), 2) == ": ")
    msg.remove_prefix(prefix.size() + 2);
  Writer w;
  w.AddU8(tag::kResponseStatus, uint8_t(int(e.code()) + 1)).AddName(tag::kResponseError, msg);
  return std::move(w).bytes();
}

// Checks the status record and returns a reader positioned on the rest.
Reader ExpectOk(const Bytes& response) {
  Reader r(response);
  uint8_t status = r.RequireU8(tag::kResponseStatus);
  if (status == kStatusOk) return r;
  std::string msg = r.Has(tag::kResponseError) ? r.RequireName(tag::kResponseError) : "";
  if (status > uint8_t(int(ErrorCode::kIo) + 1))
    throw Error(ErrorCode::kMalformed, "unknown remote status " + std::to_string(status));
  throw Error(ErrorCode(status - 1), msg);
}

pivlog::TreeKind ReadTree(Reader& r) {
  uint8_t t = r.RequireU8(tag::kRequestTree);
  if (t > uint8_t(pivlog::TreeKind::kPiv))
    throw Error(ErrorCode::kMalformed, "unknown tree " + std::to_string(t));
  return pivlog::TreeKind(t);
}

void WriteAll(int fd, const uint8_t* data, size_t size) {
  while (size > 0) {
    ssize_t n = ::write(fd, data, size);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw Error(ErrorCode::kIo, std::string("write failed: ") + std::strerror(errno));
    data += n;
    size -= size_t(n);
  }
}

// Returns false on EOF before the first byte.
bool ReadAll(int fd, uint8_t* data, size_t size) {
  size_t done = 0;
  while (done < size) {
    ssize_t n = ::read(fd, data + done, size - done);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) throw Error(ErrorCode::kIo, std::string("read failed: ") + std::strerror(errno));
    if (n == 0) {
      if (done == 0) return false;
      throw Error(ErrorCode::kIo, "stream closed inside a frame");
    }
    done += size_t(n);
  }
  return true;
}

}  // namespace

Bytes InProcessTransport::RoundTrip(ByteView request) {
  Bytes frame = EncodeFrame(request);
  size_t used = 0;
  Bytes reply = EncodeFrame(handler_(*DecodeFrame(frame, &used)));
  return *DecodeFrame(reply, &used);
}

void WriteFrame(int fd, ByteView payload) {
  Bytes frame = EncodeFrame(payload);
  WriteAll(fd, frame.data(), frame.size());
}

std::optional<Bytes> ReadFrame(int fd) {
  uint8_t header[4];
  if (!ReadAll(fd, header, sizeof header)) return std::nullopt;
  uint32_t len = ReadU32(header);
  if (len > kMaxFrameSize)
    throw Error(ErrorCode::kFrameTooLarge, std::to_string(len) + " byte frame exceeds 1 MiB");
  Bytes body(len);
  if (len > 0 && !ReadAll(fd, body.data(), len))
    throw Error(ErrorCode::kIo, "stream closed inside a frame");
  return body;
}

Bytes StreamTransport::RoundTrip(ByteView request) {
  WriteFrame(fd_, request);
  auto reply = ReadFrame(fd_);
  if (!reply) throw Error(ErrorCode::kIo, "peer closed the connection");
  return *reply;
}

void ServeStream(int fd, const Handler& handler) {
  while (auto request = ReadFrame(fd)) WriteFrame(fd, handler(*request));
}

Bytes LogService::Handle(ByteView request) {
  try {
    Reader r(request);
    uint8_t op = r.RequireU8(tag::kRequestOp);
    Writer w;
    w.AddU8(tag::kResponseStatus, kStatusOk);
    switch (Op(op)) {
      case Op::kSubmit: {
        ByteView cert = r.Require(tag::kRequestCert);
        ByteView piv = r.Require(tag::kRequestPiv);
        std::string submitter = r.RequireName(tag::kRequestSubmitter);
        r.Finish();
        pivlog::AppendResult res = log_.Append(submitter, cert, piv);
        w.AddU64(tag::kResponseLeafIndex, res.leaf_index)
            .Add(tag::kResponseHead, res.cert_head.Encode())
            .Add(tag::kResponsePivHead, res.piv_head.Encode());
        break;
      }
      case Op::kGetProof: {
        pivlog::TreeKind tree = ReadTree(r);
        auto index = r.Optional(tag::kRequestIndex);
        auto old_size = r.Optional(tag::kRequestOldSize);
        auto new_size = r.Optional(tag::kRequestNewSize);
        r.Finish();
        auto u64 = [](ByteView v) {
          if (v.size() != 8) throw Error(ErrorCode::kMalformed, "integer must be 8 bytes");
          return ReadU64(v);
        };
        pivlog::LogProof proof;
        if (index) {
          std::optional<uint64_t> size;
          if (new_size) size = u64(*new_size);
          proof = log_.InclusionProof(tree, u64(*index), size);
        } else if (old_size && new_size) {
          proof = log_.ConsistencyProof(tree, u64(*old_size), u64(*new_size));
        } else {
          throw Error(ErrorCode::kMalformed, "proof request needs an index or two sizes");
        }
        w.Add(tag::kResponseProof, proof.Encode());
        break;
      }
      case Op::kGetHead: {
        pivlog::TreeKind tree = ReadTree(r);
        r.Finish();
        w.Add(tag::kResponseHead, log_.Head(tree).Encode());
        break;
      }
      default:
        throw Error(ErrorCode::kMalformed, "log does not serve op " + std::to_string(op));
    }
    return std::move(w).bytes();
  } catch (const Error& e) {
    return ErrorResponse(e);
  }
}

Bytes DomainService::Handle(ByteView request) {
  try {
    Reader r(request);
    uint8_t op = r.RequireU8(tag::kRequestOp);
    if (Op(op) != Op::kValidateToken)
      throw Error(ErrorCode::kMalformed, "domain does not serve op " + std::to_string(op));
    std::string domain = r.RequireName(tag::kRequestDomain);
    ByteView token = r.Require(tag::kRequestToken);
    r.Finish();
    if (domain != domain_.name)
      throw Error(ErrorCode::kValidationFailed, "no such domain " + domain);
    Writer w;
    w.AddU8(tag::kResponseStatus, kStatusOk).Add(tag::kResponseToken, domain_.Respond(token));
    return std::move(w).bytes();
  } catch (const Error& e) {
    return ErrorResponse(e);
  }
}

pivlog::AppendResult LogClient::Submit(std::string_view submitter, ByteView cert, ByteView piv) {
  Writer w;
  w.AddU8(tag::kRequestOp, uint8_t(Op::kSubmit))
      .Add(tag::kRequestCert, cert)
      .Add(tag::kRequestPiv, piv)
      .AddName(tag::kRequestSubmitter, submitter);
  Bytes response = transport_.RoundTrip(w.bytes());
  Reader r = ExpectOk(response);
  pivlog::AppendResult res;
  res.leaf_index = r.RequireU64(tag::kResponseLeafIndex);
  res.cert_head = pivlog::SignedHead::Decode(r.Require(tag::kResponseHead));
  res.piv_head = pivlog::SignedHead::Decode(r.Require(tag::kResponsePivHead));
  r.Finish();
  return res;
}

pivlog::LogProof LogClient::InclusionProof(pivlog::TreeKind tree, uint64_t index,
                                           std::optional<uint64_t> tree_size) {
  Writer w;
  w.AddU8(tag::kRequestOp, uint8_t(Op::kGetProof))
      .AddU8(tag::kRequestTree, uint8_t(tree))
      .AddU64(tag::kRequestIndex, index);
  if (tree_size) w.AddU64(tag::kRequestNewSize, *tree_size);
  Bytes response = transport_.RoundTrip(w.bytes());
  Reader r = ExpectOk(response);
  pivlog::LogProof proof = pivlog::LogProof::Decode(r.Require(tag::kResponseProof));
  r.Finish();
  return proof;
}

pivlog::LogProof LogClient::ConsistencyProof(pivlog::TreeKind tree, uint64_t old_size,
                                             uint64_t new_size) {
  Writer w;
  w.AddU8(tag::kRequestOp, uint8_t(Op::kGetProof))
      .AddU8(tag::kRequestTree, uint8_t(tree))
      .AddU64(tag::kRequestOldSize, old_size)
      .AddU64(tag::kRequestNewSize, new_size);
  Bytes response = transport_.RoundTrip(w.bytes());
  Reader r = ExpectOk(response);
  pivlog::LogProof proof = pivlog::LogProof::Decode(r.Require(tag::kResponseProof));
  r.Finish();
  return proof;
}

pivlog::SignedHead LogClient::Head(pivlog::TreeKind tree) {
  Writer w;
  w.AddU8(tag::kRequestOp, uint8_t(Op::kGetHead)).AddU8(tag::kRequestTree, uint8_t(tree));
  Bytes response = transport_.RoundTrip(w.bytes());
  Reader r = ExpectOk(response);
  pivlog::SignedHead head = pivlog::SignedHead::Decode(r.Require(tag::kResponseHead));
  r.Finish();
  return head;
}

bool DomainClient::Validate(std::string_view domain, ByteView token) {
  Writer w;
  w.AddU8(tag::kRequestOp, uint8_t(Op::kValidateToken))
      .AddName(tag::kRequestDomain, domain)
      .Add(tag::kRequestToken, token);
  Bytes response = transport_.RoundTrip(w.bytes());
  Reader r = ExpectOk(response);
  ByteView echoed = r.Require(tag::kResponseToken);
  r.Finish();
  return std::equal(echoed.begin(), echoed.end(), token.begin(), token.end());
}

}  // namespace acore::wire
