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

#ifndef ACORE_TESTS_TEST_UTIL_H_
#define ACORE_TESTS_TEST_UTIL_H_

#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "acore/bytes.h"
#include "acore/cert.h"
#include "acore/error.h"

namespace acore::testing {

inline bool Contains(ByteView haystack, ByteView needle) {
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

inline cert::CertEntries SampleEntries() {
  cert::CertEntries e;
  e.subject = "www.example.com";
  e.issuer = "Example PUF CA";
  e.serial = {0x01, 0x23, 0x45, 0x67, 0x89, 0xab, 0xcd, 0xef};
  e.not_before = 1'700'000'000'000ull;
  e.not_after = 1'707'776'000'000ull;
  e.subject_pk.assign(32, 0x5a);
  return e;
}

}  // namespace acore::testing

#define EXPECT_ACORE_ERROR(stmt, code_value)                                  \
  do {                                                                        \
    try {                                                                     \
      stmt;                                                                   \
      ADD_FAILURE() << "expected " << ::acore::ErrorCodeName(code_value);     \
    } catch (const ::acore::Error& e) {                                       \
      EXPECT_EQ(e.code(), code_value) << e.what();                            \
    }                                                                         \
  } while (0)

#endif  // ACORE_TESTS_TEST_UTIL_H_
