// Copyright 2025 The spcover Authors.
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

#include <stdexcept>
#include <string>

namespace spcover {

/// Input violates an operation's precondition (bad shape, wrong field,
/// singular argument, inadmissible parameters).
struct precondition_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A constructive step produced something that failed its own replay check.
struct verification_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An enumeration would exceed its configured element budget.
struct budget_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define SPCOVER_REQUIRE(cond, msg) \
  do {                             \
    if (!(cond)) throw ::spcover::precondition_error(msg); \
  } while (0)

#define SPCOVER_VERIFY(cond, msg) \
  do {                            \
    if (!(cond)) throw ::spcover::verification_failure(msg); \
  } while (0)

}  // namespace spcover
