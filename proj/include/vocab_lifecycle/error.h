// Copyright 2026 The vocab-lifecycle Authors
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

#ifndef VOCAB_LIFECYCLE_ERROR_H_
#define VOCAB_LIFECYCLE_ERROR_H_

#include <stdexcept>
#include <string>

namespace vocab_lifecycle {

enum class ErrorCode {
  kIo,          // unreadable / unwritable files
  kInvalidInput,  // malformed artifact or argument value
  kDomain,      // operation-specific precondition failure
};

// All library failures are reported through this exception. The CLI maps
// every code to exit status 1; usage errors are handled by the parser.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
      return "io_error";
    case ErrorCode::kInvalidInput:
      return "invalid_input";
    case ErrorCode::kDomain:
      return "domain_error";
  }
  return "unknown";
}

}  // namespace vocab_lifecycle

#endif  // VOCAB_LIFECYCLE_ERROR_H_
