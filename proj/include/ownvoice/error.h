// include/ownvoice/error.h

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

#ifndef OWNVOICE_ERROR_H_
#define OWNVOICE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ownvoice {

// Coarse error classes; the CLI maps each one to its own exit code.
enum class ErrorCategory {
  kInvalidArgument,
  kShapeMismatch,
  kFormat,
  kChecksum,
  kIo,
  kProtocol,
};

std::string_view CategoryName(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] void Fail(ErrorCategory category, const std::string& what);

}  // namespace ownvoice

#endif  // OWNVOICE_ERROR_H_
