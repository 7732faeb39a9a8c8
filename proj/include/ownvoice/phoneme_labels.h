// include/ownvoice/phoneme_labels.h

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

#ifndef OWNVOICE_PHONEME_LABELS_H_
#define OWNVOICE_PHONEME_LABELS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ownvoice/stft.h"

namespace ownvoice {

inline constexpr std::string_view kSilenceId = "sil";

// Ordered phoneme classes; the position of an identifier is its index.
// Exactly one class must be named "sil".
class PhonemeInventory {
 public:
  explicit PhonemeInventory(std::vector<std::string> classes);

  // "sil" followed by "p01" .. up to `size` classes.
  static PhonemeInventory Generic(int size = 62);
  // One identifier per line; blank lines and lines starting with '#' are
  // skipped.
  static PhonemeInventory Parse(std::istream& in);
  static PhonemeInventory Load(const std::filesystem::path& path);

  int size() const { return static_cast<int>(classes_.size()); }
  int silence_id() const { return silence_id_; }
  const std::string& name(int index) const { return classes_.at(index); }
  const std::vector<std::string>& classes() const { return classes_; }
  std::optional<int> IndexOf(std::string_view id) const;

  void Write(std::ostream& out) const;

 private:
  std::vector<std::string> classes_;
  int silence_id_ = 0;
};

struct LabelSpan {
  std::size_t start = 0;  // first sample
  std::size_t end = 0;    // one past the last sample
  int phoneme = 0;

  std::size_t length() const { return end - start; }
  bool operator==(const LabelSpan&) const = default;
};

// Sorted, contiguous spans that tile [0, total_samples).
struct LabelTrack {
  std::vector<LabelSpan> spans;
  std::size_t total_samples = 0;
};

// One phoneme index per STFT frame.
using FrameLabels = std::vector<int>;

// Reads `start<TAB>end<TAB>phoneme_id` lines. Spans may come in any order
// but must not overlap or reach past `total_samples`; uncovered samples are
// assigned to the silence class.
LabelTrack ParseLabelTrack(std::istream& in, const PhonemeInventory& inventory,
                           std::size_t total_samples);
LabelTrack LoadLabelTrack(const std::filesystem::path& path,
                          const PhonemeInventory& inventory,
                          std::size_t total_samples);
void WriteLabelTrack(std::ostream& out, const LabelTrack& track,
                     const PhonemeInventory& inventory);

// Each frame takes the phoneme covering most of its in-signal samples; a
// tie goes to the span that starts first.
FrameLabels ToFrameLabels(const LabelTrack& track, const FrameParams& params,
                          std::size_t num_frames);

// Inverse-style helper: frame l's label is assigned to samples
// [l * hop, (l + 1) * hop). Projecting the result again returns `labels`.
LabelTrack TrackFromFrameLabels(const FrameLabels& labels,
                                const FrameParams& params,
                                std::size_t total_samples);

}  // namespace ownvoice

#endif  // OWNVOICE_PHONEME_LABELS_H_
