/* Copyright 2026 The Muzzleprint Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef MUZZLEPRINT_ERROR_HPP_
#define MUZZLEPRINT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace muzzleprint {

// Failure categories shared by every module. The CLI prints the
// category name as the machine-parsable part of its one-line error.
enum class ErrorCode {
  kDecode,
  kUnsupportedFormat,
  kRange,
  kValidation,
  kConflict,
  kArgument,
  kSize,
  kDegenerateData,
  kConfiguration,
  kUndefined,
  kNotFound,
  kFile,
  kLocked,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace muzzleprint

#endif  // MUZZLEPRINT_ERROR_HPP_
