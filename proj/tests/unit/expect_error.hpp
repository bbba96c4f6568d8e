// Copyright 2026 The indkg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <gtest/gtest.h>

#include "indkg/error.hpp"

// Asserts that `stmt` throws indkg::Error carrying `expected_code`.
#define EXPECT_INDKG_ERROR(stmt, expected_code)                                  \
  do {                                                                           \
    try {                                                                        \
      stmt;                                                                      \
      ADD_FAILURE() << "expected " #expected_code " from: " #stmt;               \
    } catch (const ::indkg::Error& indkg_error_) {                               \
      EXPECT_EQ(indkg_error_.code(), expected_code) << indkg_error_.what();       \
    }                                                                            \
  } while (false)
