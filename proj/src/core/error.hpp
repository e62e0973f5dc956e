// Copyright 2026 The asrprobe Authors
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

namespace asrprobe {

enum class ErrorCode {
  kInvalidInput = 1,
  kInvalidParameter,
  kInfeasibleDrop,
  kLoad,
  kContract,
  kUndefinedWer,
  kParse,
  kIo,
  kConfig,
  kHashMismatch,
  kMissingPoints,
};

const char* ErrorCodeName(ErrorCode code);

/// Every failure raised by the toolkit carries one of the codes above; the C
/// API maps them 1:1 onto asrp_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kInfeasibleDrop: return "infeasible-drop";
    case ErrorCode::kLoad: return "load";
    case ErrorCode::kContract: return "contract";
    case ErrorCode::kUndefinedWer: return "undefined-wer";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kHashMismatch: return "hash-mismatch";
    case ErrorCode::kMissingPoints: return "missing-points";
  }
  return "unknown";
}

}  // namespace asrprobe
