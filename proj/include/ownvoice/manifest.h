// include/ownvoice/manifest.h

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

#ifndef OWNVOICE_MANIFEST_H_
#define OWNVOICE_MANIFEST_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ownvoice {

enum class Split { kIdentify, kEvaluate };

std::string_view SplitName(Split split);
std::optional<Split> ParseSplit(std::string_view name);

struct Utterance {
  std::string talker_id;
  std::string utterance_id;
  std::filesystem::path outer_path;  // resolved against the manifest folder
  std::filesystem::path inear_path;
  std::filesystem::path label_path;
  Split split = Split::kIdentify;
  std::size_t num_samples = 0;  // filled in by LoadManifest
};

// Paired-recording corpus description, see docs/formats.md. Entry order is
// significant: every ordering rule downstream (filler pools, talker lists)
// follows it.
struct Manifest {
  int sample_rate = 0;
  std::filesystem::path inventory_path;
  std::vector<Utterance> entries;

  // Talker ids in order of first appearance.
  std::vector<std::string> talkers() const;
  std::vector<const Utterance*> Select(std::string_view talker,
                                       Split split) const;
};

// Parses and validates: unique (talker, utterance) keys, every referenced
// file present, mono audio at the manifest rate, equal outer/in-ear length.
Manifest LoadManifest(const std::filesystem::path& path);

// Writes `manifest` with paths relative to the manifest's folder when they
// lie beneath it.
void SaveManifest(const std::filesystem::path& path, const Manifest& manifest);

}  // namespace ownvoice

#endif  // OWNVOICE_MANIFEST_H_
