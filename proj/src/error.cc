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

#include "acore/error.h"

namespace acore {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInstanceUnavailable: return "instance-unavailable";
    case ErrorCode::kEccFailure: return "ecc-failure";
    case ErrorCode::kNotAMember: return "not-a-member";
    case ErrorCode::kDuplicateMember: return "duplicate-member";
    case ErrorCode::kUnknownMember: return "unknown-member";
    case ErrorCode::kEmptyGroup: return "empty-group";
    case ErrorCode::kGroupExhausted: return "group-exhausted";
    case ErrorCode::kEncodingLimit: return "encoding-limit";
    case ErrorCode::kMalformed: return "malformed";
    case ErrorCode::kUnauthorized: return "unauthorized";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kNotLogged: return "not-logged";
    case ErrorCode::kDuplicateSerial: return "duplicate-serial";
    case ErrorCode::kValidationFailed: return "validation-failed";
    case ErrorCode::kFrameTooLarge: return "frame-too-large";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace acore
