// include/ownvoice/model_io.h

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

#ifndef OWNVOICE_MODEL_IO_H_
#define OWNVOICE_MODEL_IO_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <variant>

#include "ownvoice/adaptive_nlms.h"
#include "ownvoice/rtf_models.h"
#include "ownvoice/stft.h"

namespace ownvoice {

enum class TransferKind { kSpeechIndependent, kSpeechDependent, kAdaptive };

std::string_view TransferKindName(TransferKind kind);

// A finalized transfer model as stored on disk. For the adaptive kind only
// the NLMS configuration is stored; its coefficient trajectory is rebuilt
// at simulation time.
struct TransferModel {
  FrameParams frame;
  std::variant<SpeechIndependentModel, SpeechDependentModel, NlmsConfig> body;
  // Free-form single-line key/value pairs (talker, scope, tool version).
  std::map<std::string, std::string> metadata;

  TransferKind kind() const;

  bool operator==(const TransferModel&) const = default;
};

inline constexpr int kModelFormatVersion = 1;

// Text header terminated by "end", then a little-endian float64 payload of
// interleaved re/im values guarded by a CRC-32. See docs/formats.md.
void WriteModel(std::ostream& out, const TransferModel& model);
TransferModel ReadModel(std::istream& in);

void SaveModel(const std::filesystem::path& path, const TransferModel& model);
TransferModel LoadModel(const std::filesystem::path& path);

}  // namespace ownvoice

#endif  // OWNVOICE_MODEL_IO_H_
