// src/error.cc

// Copyright 2026 The ownvoice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "ownvoice/error.h"

namespace ownvoice {

std::string_view CategoryName(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kInvalidArgument: return "invalid-argument";
    case ErrorCategory::kShapeMismatch: return "shape-mismatch";
    case ErrorCategory::kFormat: return "format";
    case ErrorCategory::kChecksum: return "checksum";
    case ErrorCategory::kIo: return "io";
    case ErrorCategory::kProtocol: return "protocol";
  }
  return "unknown";
}

void Fail(ErrorCategory category, const std::string& what) {
  throw Error(category, what);
}

}  // namespace ownvoice
