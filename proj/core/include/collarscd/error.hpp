// Copyright 2026 The collarscd Authors
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

namespace collarscd {

// Error categories shared by the library, the CLI and foreign-language
// wrappers. The CLI maps kNumeric and kInternal to exit code 1 and every
// other category to exit code 2.
enum class ErrorKind {
  kInvalidArgument,
  kLengthMismatch,
  kOutOfBounds,
  kInvalidConfig,
  kOverlap,
  kTooLarge,
  kNumeric,
  kParse,
  kProtocol,
  kIo,
  kInternal,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace collarscd
