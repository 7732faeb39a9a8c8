// src/phoneme_labels.cc

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

#include "ownvoice/phoneme_labels.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "ownvoice/error.h"

namespace ownvoice {
namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool ParseCount(const std::string& field, std::size_t* value) {
  if (field.empty() ||
      field.find_first_not_of("0123456789") != std::string::npos) {
    return false;
  }
  std::istringstream in(field);
  in >> *value;
  return !in.fail();
}

}  // namespace

PhonemeInventory::PhonemeInventory(std::vector<std::string> classes)
    : classes_(std::move(classes)) {
  if (classes_.empty()) {
    Fail(ErrorCategory::kFormat, "phoneme inventory is empty");
  }
  std::unordered_set<std::string> seen;
  std::optional<int> silence;
  for (int i = 0; i < size(); ++i) {
    if (classes_[i].empty()) {
      Fail(ErrorCategory::kFormat, "empty phoneme identifier");
    }
    if (!seen.insert(classes_[i]).second) {
      Fail(ErrorCategory::kFormat,
           "duplicate phoneme identifier '" + classes_[i] + "'");
    }
    if (classes_[i] == kSilenceId) silence = i;
  }
  if (!silence) {
    Fail(ErrorCategory::kFormat, "phoneme inventory has no 'sil' class");
  }
  silence_id_ = *silence;
}

PhonemeInventory PhonemeInventory::Generic(int size) {
  if (size < 1) {
    Fail(ErrorCategory::kInvalidArgument, "inventory size must be >= 1");
  }
  std::vector<std::string> classes{std::string(kSilenceId)};
  for (int i = 1; i < size; ++i) {
    char name[16];
    std::snprintf(name, sizeof(name), "p%02d", i);
    classes.emplace_back(name);
  }
  return PhonemeInventory(std::move(classes));
}

PhonemeInventory PhonemeInventory::Parse(std::istream& in) {
  std::vector<std::string> classes;
  std::string line;
  while (std::getline(in, line)) {
    const std::string id = Trim(line);
    if (id.empty() || id[0] == '#') continue;
    classes.push_back(id);
  }
  return PhonemeInventory(std::move(classes));
}

PhonemeInventory PhonemeInventory::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCategory::kIo, "cannot open inventory " + path.string());
  return Parse(in);
}

std::optional<int> PhonemeInventory::IndexOf(std::string_view id) const {
  const auto it = std::find(classes_.begin(), classes_.end(), id);
  if (it == classes_.end()) return std::nullopt;
  return static_cast<int>(it - classes_.begin());
}

void PhonemeInventory::Write(std::ostream& out) const {
  for (const auto& id : classes_) out << id << '\n';
}

LabelTrack ParseLabelTrack(std::istream& in, const PhonemeInventory& inventory,
                           std::size_t total_samples) {
  std::vector<LabelSpan> spans;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty() || line[0] == '#') continue;

    std::vector<std::string> fields;
    std::istringstream fields_in(line);
    std::string field;
    while (std::getline(fields_in, field, '\t')) fields.push_back(Trim(field));
    const std::string where = "label line " + std::to_string(line_no);
    LabelSpan span;
    if (fields.size() != 3 || !ParseCount(fields[0], &span.start) ||
        !ParseCount(fields[1], &span.end)) {
      Fail(ErrorCategory::kFormat, where + ": expected start<TAB>end<TAB>id");
    }
    if (span.end <= span.start) {
      Fail(ErrorCategory::kFormat, where + ": span end must exceed start");
    }
    if (span.end > total_samples) {
      Fail(ErrorCategory::kFormat,
           where + ": span ends at " + std::to_string(span.end) +
               " past the signal length " + std::to_string(total_samples));
    }
    const auto index = inventory.IndexOf(fields[2]);
    if (!index) {
      Fail(ErrorCategory::kFormat,
           where + ": unknown phoneme '" + fields[2] + "'");
    }
    span.phoneme = *index;
    spans.push_back(span);
  }

  std::sort(spans.begin(), spans.end(),
            [](const LabelSpan& a, const LabelSpan& b) {
              return a.start < b.start;
            });

  LabelTrack track;
  track.total_samples = total_samples;
  std::size_t cursor = 0;
  for (const auto& span : spans) {
    if (span.start < cursor) {
      Fail(ErrorCategory::kFormat,
           "overlapping label spans at sample " + std::to_string(span.start));
    }
    if (span.start > cursor) {
      track.spans.push_back({cursor, span.start, inventory.silence_id()});
    }
    track.spans.push_back(span);
    cursor = span.end;
  }
  if (cursor < total_samples) {
    track.spans.push_back({cursor, total_samples, inventory.silence_id()});
  }
  return track;
}

LabelTrack LoadLabelTrack(const std::filesystem::path& path,
                          const PhonemeInventory& inventory,
                          std::size_t total_samples) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCategory::kIo, "cannot open label file " + path.string());
  return ParseLabelTrack(in, inventory, total_samples);
}

void WriteLabelTrack(std::ostream& out, const LabelTrack& track,
                     const PhonemeInventory& inventory) {
  for (const auto& span : track.spans) {
    out << span.start << '\t' << span.end << '\t' << inventory.name(span.phoneme)
        << '\n';
  }
}

FrameLabels ToFrameLabels(const LabelTrack& track, const FrameParams& params,
                          std::size_t num_frames) {
  params.Validate();
  if (NumFrames(track.total_samples, params) != num_frames) {
    Fail(ErrorCategory::kShapeMismatch,
         "label track of " + std::to_string(track.total_samples) +
             " samples does not yield " + std::to_string(num_frames) +
             " frames");
  }
  const std::size_t size = params.frame_length;
  const std::size_t hop = params.hop;

  FrameLabels labels(num_frames);
  std::size_t first_span = 0;
  for (std::size_t l = 0; l < num_frames; ++l) {
    const std::size_t begin = l * hop;
    const std::size_t end = std::min(begin + size, track.total_samples);
    while (first_span < track.spans.size() &&
           track.spans[first_span].end <= begin) {
      ++first_span;
    }
    std::size_t best_count = 0;
    int best = -1;
    for (std::size_t s = first_span;
         s < track.spans.size() && track.spans[s].start < end; ++s) {
      const auto& span = track.spans[s];
      const std::size_t count =
          std::min(span.end, end) - std::max(span.start, begin);
      // Spans are visited in start order, so a strict comparison keeps the
      // earliest span on ties.
      if (count > best_count) {
        best_count = count;
        best = span.phoneme;
      }
    }
    if (best < 0) {
      Fail(ErrorCategory::kFormat,
           "label track does not cover frame " + std::to_string(l));
    }
    labels[l] = best;
  }
  return labels;
}

LabelTrack TrackFromFrameLabels(const FrameLabels& labels,
                                const FrameParams& params,
                                std::size_t total_samples) {
  if (NumFrames(total_samples, params) != labels.size()) {
    Fail(ErrorCategory::kShapeMismatch, "frame labels do not match length");
  }
  const std::size_t hop = params.hop;
  LabelTrack track;
  track.total_samples = total_samples;
  for (std::size_t l = 0; l < labels.size(); ++l) {
    const std::size_t start = l * hop;
    const std::size_t end = std::min(start + hop, total_samples);
    if (!track.spans.empty() && track.spans.back().phoneme == labels[l]) {
      track.spans.back().end = end;
    } else {
      track.spans.push_back({start, end, labels[l]});
    }
  }
  return track;
}

}  // namespace ownvoice
