// include/ownvoice/synth_oracle.h

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

#ifndef OWNVOICE_SYNTH_ORACLE_H_
#define OWNVOICE_SYNTH_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ownvoice/phoneme_labels.h"
#include "ownvoice/stft.h"

namespace ownvoice {

enum class Excitation { kWhiteNoise, kFilteredNoise, kPulseTrain };

std::string_view ExcitationName(Excitation excitation);
std::optional<Excitation> ParseExcitation(std::string_view name);

// Synthetic paired corpus with planted per-phoneme FIR transfer paths.
// Phoneme 0 is the silence class.
struct SynthSpec {
  std::uint64_t seed = 1;
  int num_talkers = 3;
  int utterances_per_talker = 8;
  std::size_t utterance_length = 20000;  // samples
  int num_phonemes = 5;
  int filter_length = 4;
  Excitation excitation = Excitation::kWhiteNoise;
  // Per-talker deviation from the shared base filters, relative to each
  // phoneme's gain. 0 makes every talker identical.
  double perturbation_scale = 0.2;
  double identify_fraction = 0.5;
  int sample_rate = 5000;
  int frame_length = 128;
  // Span lengths are uniform in [4, max_span_frames] frames.
  int max_span_frames = 12;
  // Span levels are uniform in [min_span_level, 1] times a fixed scale;
  // silence spans (phoneme 0) are further scaled by silence_level.
  double min_span_level = 0.25;
  // Base filter gains are log-uniform in [min_gain, max_gain].
  double min_gain = 0.4;
  double max_gain = 2.5;
  double silence_level = 0.1;

  void Validate() const;
};

// filters[talker][phoneme] holds the planted FIR taps.
struct GroundTruth {
  std::vector<std::string> talkers;
  std::vector<std::vector<std::vector<double>>> filters;
};

// G(k) = sum_t g[t] exp(-j 2 pi k t / K) at the one-sided STFT bins.
std::vector<Complex> FrequencyResponse(std::span<const double> taps,
                                       const FrameParams& params);

// Draws the planted filters without touching the disk.
GroundTruth DrawFilters(const SynthSpec& spec);

// Random segmentation of one utterance: spans of 4 .. max_span_frames
// frames, consecutive spans never share a phoneme.
LabelTrack DrawSegmentation(const SynthSpec& spec, std::uint64_t stream);

// In-ear rendering: the active span's filter applied by time-domain
// convolution, with a linear cross-fade of `crossfade` samples centred on
// every span boundary.
std::vector<double> RenderInEar(
    std::span<const double> outer, const LabelTrack& track,
    const std::vector<std::vector<double>>& filters, std::size_t crossfade);

// Writes inventory.txt, manifest.json, audio/, labels/, ground_truth/ (one
// speech-dependent model per talker) and ground_truth.json under
// `out_dir`. Same spec and seed give byte-identical files.
GroundTruth GenerateCorpus(const SynthSpec& spec,
                           const std::filesystem::path& out_dir);

}  // namespace ownvoice

#endif  // OWNVOICE_SYNTH_ORACLE_H_
