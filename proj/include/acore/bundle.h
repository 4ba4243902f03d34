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

#ifndef ACORE_BUNDLE_H_
#define ACORE_BUNDLE_H_

#include <vector>

#include "acore/bytes.h"
#include "acore/cert.h"
#include "acore/log.h"
#include "acore/piv.h"

namespace acore::pivlog {

// Delivery unit standing in for a stapled OCSP response: both chains, one
// inclusion proof per level in each tree, and the heads those proofs use.
struct StapledBundle {
  cert::CertChain cert_chain;
  PivChain piv_chain;
  std::vector<LogProof> cert_proofs;
  std::vector<LogProof> piv_proofs;
  SignedHead cert_head;
  SignedHead piv_head;

  // One 0x40 record: version byte, then the struct container.
  Bytes Encode() const;
  // Throws Error(kMalformed).
  static StapledBundle Decode(ByteView bytes);

  friend bool operator==(const StapledBundle&, const StapledBundle&) = default;
};

// Proofs against the log's current size. Throws kNotLogged when some level's
// (cert, PIV) pair is absent, kInvalidArgument when the chains differ in
// length.
StapledBundle BuildBundle(const TransparencyLog& log, const cert::CertChain& chain,
                          const PivChain& pivs);

}  // namespace acore::pivlog

#endif  // ACORE_BUNDLE_H_
