// Copyright 2026 The Qutrit Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qutrit {

enum class ErrorCode {
  kConventionViolation,
  kRegime,
  kConfiguration,
  kInvalidState,
  kSettingsIncomplete,
  kDegenerateEngineering,
  kRemapUndefined,
  kParse,
  kIo,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConventionViolation: return "convention_violation";
    case ErrorCode::kRegime: return "regime";
    case ErrorCode::kConfiguration: return "configuration";
    case ErrorCode::kInvalidState: return "invalid_state";
    case ErrorCode::kSettingsIncomplete: return "settings_incomplete";
    case ErrorCode::kDegenerateEngineering: return "degenerate_engineering";
    case ErrorCode::kRemapUndefined: return "remap_undefined";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qutrit
