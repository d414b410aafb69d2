// Copyright 2026 The DAE Factuality Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DAE_ERROR_H_
#define DAE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dae {

enum class ErrorCode {
  kIo,            // file missing, unreadable, or unwritable
  kParse,         // malformed CoNLL-U input
  kSchema,        // dataset record does not follow the on-disk schema
  kStructural,    // arc or token index out of range
  kPrecondition,  // caller violated an operation's precondition
  kNoOp,          // augmentation had nothing to change
  kModel,         // training diverged, bad checkpoint, etc.
  kMetric,        // metric undefined on the given input
};

// Short upper-case category used on CLI error lines.
std::string_view ErrorCategory(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dae

#endif  // DAE_ERROR_H_
