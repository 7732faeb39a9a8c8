// include/ownvoice/rtf_models.h

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

#ifndef OWNVOICE_RTF_MODELS_H_
#define OWNVOICE_RTF_MODELS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ownvoice/phoneme_labels.h"
#include "ownvoice/stft.h"

namespace ownvoice {

inline constexpr double kDefaultSmoothingAlpha = 0.8;
inline constexpr int kDefaultFallbackMinFrames = 10;
// Bins whose accumulated outer-microphone power is below this fraction of
// the largest accumulated power get a zero RTF.
inline constexpr double kPowerFloorRatio = 1e-12;

// Running least-squares sums for outer -> in-ear RTF estimation.
//
// Row p < num_phonemes() holds sum(Y_i * conj(Y_o)) and sum(|Y_o|^2) over
// the frames labelled p; row num_phonemes() (the pooled row) holds the same
// sums over every frame regardless of label. Accumulators built from
// disjoint data can be merged, which is how talker-averaged and
// leave-one-out models are formed.
class RtfAccumulator {
 public:
  RtfAccumulator(int num_phonemes, std::size_t num_bins);

  int num_phonemes() const { return num_phonemes_; }
  std::size_t num_bins() const { return num_bins_; }
  int pooled_row() const { return num_phonemes_; }

  std::span<const Complex> cross(int row) const {
    return {cross_.data() + Offset(row), num_bins_};
  }
  std::span<const double> power(int row) const {
    return {power_.data() + Offset(row), num_bins_};
  }
  std::int64_t frame_count(int row) const { return frame_counts_.at(row); }

  // Adds every frame to the row of its label and to the pooled row.
  void Accumulate(const Spectrogram& outer, const Spectrogram& inear,
                  const FrameLabels& labels);
  // Adds every frame to the pooled row only.
  void AccumulatePooled(const Spectrogram& outer, const Spectrogram& inear);
  // Elementwise sum. Throws kShapeMismatch on differing dimensions.
  void Merge(const RtfAccumulator& other);

  double MaxPower() const;

  bool operator==(const RtfAccumulator&) const = default;

 private:
  std::size_t Offset(int row) const;
  void AddFrame(int row, std::span<const Complex> outer,
                std::span<const Complex> inear);
  void CheckPair(const Spectrogram& outer, const Spectrogram& inear) const;

  int num_phonemes_;
  std::size_t num_bins_;
  std::vector<Complex> cross_;
  std::vector<double> power_;
  std::vector<std::int64_t> frame_counts_;
};

RtfAccumulator Merge(RtfAccumulator a, const RtfAccumulator& b);

struct SpeechIndependentModel {
  std::vector<Complex> rtf;

  bool operator==(const SpeechIndependentModel&) const = default;
};

struct SpeechDependentModel {
  int num_phonemes = 0;
  std::size_t num_bins = 0;
  std::vector<Complex> rtf_table;  // num_phonemes x num_bins, row-major
  std::vector<bool> valid;
  SpeechIndependentModel fallback;
  double smoothing_alpha = kDefaultSmoothingAlpha;

  // RTF used for phoneme p: its own row when valid, the fallback otherwise.
  std::span<const Complex> RtfFor(int phoneme) const;

  bool operator==(const SpeechDependentModel&) const = default;
};

// H(k) = sum Y_i Y_o^* / sum |Y_o|^2 over the pooled row.
SpeechIndependentModel FinalizeSpeechIndependent(const RtfAccumulator& acc);

// Per-phoneme least-squares RTFs. Phonemes seen in fewer than
// `fallback_min_frames` frames are marked invalid and served by the pooled
// estimate.
SpeechDependentModel FinalizeSpeechDependent(
    const RtfAccumulator& acc,
    int fallback_min_frames = kDefaultFallbackMinFrames,
    double smoothing_alpha = kDefaultSmoothingAlpha);

// First-order recursive smoothing of the per-frame RTF selection:
// H(l) = alpha * H(l - 1) + (1 - alpha) * raw(l), seeded with raw(0).
class RtfSmoother {
 public:
  RtfSmoother(std::size_t num_bins, double alpha);

  std::span<const Complex> Next(std::span<const Complex> raw);

 private:
  double alpha_;
  bool started_ = false;
  std::vector<Complex> state_;
};

// Smoothed RTF for every frame of `labels`; frame-major.
std::vector<std::vector<Complex>> SmoothedRtfTrajectory(
    const SpeechDependentModel& model, const FrameLabels& labels);

std::vector<double> SimulateSpeechIndependent(
    const SpeechIndependentModel& model, std::span<const double> outer,
    const FrameParams& params);

std::vector<double> SimulateSpeechDependent(const SpeechDependentModel& model,
                                            std::span<const double> outer,
                                            const FrameLabels& labels,
                                            const FrameParams& params);

}  // namespace ownvoice

#endif  // OWNVOICE_RTF_MODELS_H_
