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

#include "muzzleprint/error.hpp"

namespace muzzleprint {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDecode: return "decode";
    case ErrorCode::kUnsupportedFormat: return "unsupported-format";
    case ErrorCode::kRange: return "range";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kArgument: return "argument";
    case ErrorCode::kSize: return "size";
    case ErrorCode::kDegenerateData: return "degenerate-data";
    case ErrorCode::kConfiguration: return "configuration";
    case ErrorCode::kUndefined: return "undefined";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kFile: return "file";
    case ErrorCode::kLocked: return "locked";
  }
  return "unknown";
}

}  // namespace muzzleprint
