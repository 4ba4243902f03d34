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

#ifndef ACORE_PIV_H_
#define ACORE_PIV_H_

#include <cstdint>
#include <string>
#include <vector>

#include "acore/bytes.h"
#include "acore/cert.h"
#include "acore/puf.h"

namespace acore::pivlog {

// PUF Invocation Vector <Z, T>: which CA invoked a PUF from which
// manufacturer at what time, the complement pi ^ RP_k, and the chained tag.
struct Piv {
  std::string z_ca_name;
  std::string z_manufacturer;
  uint64_t z_ts = 0;
  Word z_rp_complement;
  Word tag;

  // Z only (records 0x20..0x23); this is what the tag covers.
  Bytes EncodeZ() const;
  Bytes Encode() const;
  static Piv Decode(ByteView bytes);

  friend bool operator==(const Piv&, const Piv&) = default;
};

struct PivChain {
  std::vector<Piv> pivs;

  size_t size() const { return pivs.size(); }
  friend bool operator==(const PivChain&, const PivChain&) = default;
};

Bytes EncodePivChain(const PivChain& chain);
PivChain DecodePivChain(ByteView bytes);

// All-zero T_h used above the root.
Word RootTagSentinel(size_t n_bits);

// T = H_R(Z || Cert || T_h) = H(R || Z || Cert || T_h).
Word ComputePivTag(const Word& response, ByteView encoded_z, ByteView encoded_cert,
                   const Word& higher_tag);

// Builds the PIV for one issuance. A T_h from the wrong level is accepted and
// yields a PIV that fails verification later.
Piv MakePiv(const cert::IssuanceRecord& record, const puf::PufGroup& issuer_group,
            const cert::PufCertificate& certificate, const Word& higher_tag);

}  // namespace acore::pivlog

#endif  // ACORE_PIV_H_
