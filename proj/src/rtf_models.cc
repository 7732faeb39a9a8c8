// src/rtf_models.cc

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

#include "ownvoice/rtf_models.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ownvoice/error.h"

namespace ownvoice {
namespace {

void CheckLabels(const FrameLabels& labels, std::size_t num_frames,
                 int num_phonemes) {
  if (labels.size() != num_frames) {
    Fail(ErrorCategory::kShapeMismatch,
         std::to_string(labels.size()) + " frame labels for " +
             std::to_string(num_frames) + " frames");
  }
  for (int p : labels) {
    if (p < 0 || p >= num_phonemes) {
      Fail(ErrorCategory::kInvalidArgument,
           "frame label " + std::to_string(p) + " outside inventory of " +
               std::to_string(num_phonemes));
    }
  }
}

void CheckBins(std::size_t model_bins, const FrameParams& params) {
  if (model_bins != static_cast<std::size_t>(params.num_bins())) {
    Fail(ErrorCategory::kShapeMismatch,
         "model has " + std::to_string(model_bins) +
             " bins, frame length " + std::to_string(params.frame_length) +
             " needs " + std::to_string(params.num_bins()));
  }
}

std::vector<Complex> LeastSquaresRow(const RtfAccumulator& acc, int row,
                                     double floor) {
  const auto cross = acc.cross(row);
  const auto power = acc.power(row);
  std::vector<Complex> rtf(acc.num_bins());
  for (std::size_t k = 0; k < rtf.size(); ++k) {
    rtf[k] = power[k] < floor || power[k] == 0.0 ? Complex{}
                                                 : cross[k] / power[k];
  }
  return rtf;
}

}  // namespace

RtfAccumulator::RtfAccumulator(int num_phonemes, std::size_t num_bins)
    : num_phonemes_(num_phonemes), num_bins_(num_bins) {
  if (num_phonemes < 1 || num_bins < 1) {
    Fail(ErrorCategory::kInvalidArgument,
         "accumulator needs at least one phoneme and one bin");
  }
  const std::size_t rows = static_cast<std::size_t>(num_phonemes) + 1;
  cross_.assign(rows * num_bins, Complex{});
  power_.assign(rows * num_bins, 0.0);
  frame_counts_.assign(rows, 0);
}

std::size_t RtfAccumulator::Offset(int row) const {
  if (row < 0 || row > num_phonemes_) {
    Fail(ErrorCategory::kInvalidArgument,
         "accumulator row " + std::to_string(row) + " out of range");
  }
  return static_cast<std::size_t>(row) * num_bins_;
}

void RtfAccumulator::AddFrame(int row, std::span<const Complex> outer,
                              std::span<const Complex> inear) {
  Complex* cross = cross_.data() + Offset(row);
  double* power = power_.data() + Offset(row);
  for (std::size_t k = 0; k < num_bins_; ++k) {
    cross[k] += inear[k] * std::conj(outer[k]);
    power[k] += std::norm(outer[k]);
  }
  ++frame_counts_[row];
}

void RtfAccumulator::CheckPair(const Spectrogram& outer,
                               const Spectrogram& inear) const {
  if (outer.num_bins() != num_bins_ || inear.num_bins() != num_bins_ ||
      outer.num_frames() != inear.num_frames()) {
    Fail(ErrorCategory::kShapeMismatch,
         "outer/in-ear spectrograms do not match the accumulator shape");
  }
}

void RtfAccumulator::Accumulate(const Spectrogram& outer,
                                const Spectrogram& inear,
                                const FrameLabels& labels) {
  CheckPair(outer, inear);
  CheckLabels(labels, outer.num_frames(), num_phonemes_);
  for (std::size_t l = 0; l < outer.num_frames(); ++l) {
    AddFrame(labels[l], outer.frame(l), inear.frame(l));
    AddFrame(pooled_row(), outer.frame(l), inear.frame(l));
  }
}

void RtfAccumulator::AccumulatePooled(const Spectrogram& outer,
                                      const Spectrogram& inear) {
  CheckPair(outer, inear);
  for (std::size_t l = 0; l < outer.num_frames(); ++l) {
    AddFrame(pooled_row(), outer.frame(l), inear.frame(l));
  }
}

void RtfAccumulator::Merge(const RtfAccumulator& other) {
  if (other.num_phonemes_ != num_phonemes_ || other.num_bins_ != num_bins_) {
    Fail(ErrorCategory::kShapeMismatch,
         "cannot merge accumulators of different shapes");
  }
  for (std::size_t i = 0; i < cross_.size(); ++i) {
    cross_[i] += other.cross_[i];
    power_[i] += other.power_[i];
  }
  for (std::size_t i = 0; i < frame_counts_.size(); ++i) {
    frame_counts_[i] += other.frame_counts_[i];
  }
}

double RtfAccumulator::MaxPower() const {
  return *std::max_element(power_.begin(), power_.end());
}

RtfAccumulator Merge(RtfAccumulator a, const RtfAccumulator& b) {
  a.Merge(b);
  return a;
}

std::span<const Complex> SpeechDependentModel::RtfFor(int phoneme) const {
  if (phoneme < 0 || phoneme >= num_phonemes) {
    Fail(ErrorCategory::kInvalidArgument,
         "phoneme " + std::to_string(phoneme) + " outside model inventory");
  }
  if (!valid[phoneme]) return fallback.rtf;
  return {rtf_table.data() + static_cast<std::size_t>(phoneme) * num_bins,
          num_bins};
}

SpeechIndependentModel FinalizeSpeechIndependent(const RtfAccumulator& acc) {
  const double max_power = acc.MaxPower();
  if (acc.frame_count(acc.pooled_row()) == 0 || !(max_power > 0.0)) {
    Fail(ErrorCategory::kInvalidArgument,
         "cannot finalize an RTF from an empty accumulator");
  }
  return {LeastSquaresRow(acc, acc.pooled_row(), kPowerFloorRatio * max_power)};
}

SpeechDependentModel FinalizeSpeechDependent(const RtfAccumulator& acc,
                                             int fallback_min_frames,
                                             double smoothing_alpha) {
  if (!(smoothing_alpha >= 0.0 && smoothing_alpha < 1.0)) {
    Fail(ErrorCategory::kInvalidArgument, "smoothing alpha must be in [0, 1)");
  }
  SpeechDependentModel model;
  model.fallback = FinalizeSpeechIndependent(acc);
  model.num_phonemes = acc.num_phonemes();
  model.num_bins = acc.num_bins();
  model.smoothing_alpha = smoothing_alpha;
  model.valid.assign(model.num_phonemes, false);
  model.rtf_table.assign(model.num_phonemes * model.num_bins, Complex{});

  const double floor = kPowerFloorRatio * acc.MaxPower();
  for (int p = 0; p < model.num_phonemes; ++p) {
    if (acc.frame_count(p) < fallback_min_frames || acc.frame_count(p) == 0) {
      continue;
    }
    const auto row = LeastSquaresRow(acc, p, floor);
    std::copy(row.begin(), row.end(),
              model.rtf_table.begin() + p * model.num_bins);
    model.valid[p] = true;
  }
  return model;
}

RtfSmoother::RtfSmoother(std::size_t num_bins, double alpha)
    : alpha_(alpha), state_(num_bins) {}

std::span<const Complex> RtfSmoother::Next(std::span<const Complex> raw) {
  if (!started_) {
    std::copy(raw.begin(), raw.end(), state_.begin());
    started_ = true;
    return state_;
  }
  // A bin whose raw value already equals the state is a fixed point of the
  // recursion; skipping it keeps that fixed point free of rounding.
  for (std::size_t k = 0; k < state_.size(); ++k) {
    if (raw[k] == state_[k]) continue;
    state_[k] = alpha_ * state_[k] + (1.0 - alpha_) * raw[k];
  }
  return state_;
}

std::vector<std::vector<Complex>> SmoothedRtfTrajectory(
    const SpeechDependentModel& model, const FrameLabels& labels) {
  CheckLabels(labels, labels.size(), model.num_phonemes);
  RtfSmoother smoother(model.num_bins, model.smoothing_alpha);
  std::vector<std::vector<Complex>> trajectory;
  trajectory.reserve(labels.size());
  for (int p : labels) {
    const auto smoothed = smoother.Next(model.RtfFor(p));
    trajectory.emplace_back(smoothed.begin(), smoothed.end());
  }
  return trajectory;
}

std::vector<double> SimulateSpeechIndependent(
    const SpeechIndependentModel& model, std::span<const double> outer,
    const FrameParams& params) {
  CheckBins(model.rtf.size(), params);
  Spectrogram spec = Analyze(outer, params);
  for (std::size_t l = 0; l < spec.num_frames(); ++l) {
    auto frame = spec.frame(l);
    for (std::size_t k = 0; k < frame.size(); ++k) frame[k] *= model.rtf[k];
  }
  return Synthesize(spec);
}

std::vector<double> SimulateSpeechDependent(const SpeechDependentModel& model,
                                            std::span<const double> outer,
                                            const FrameLabels& labels,
                                            const FrameParams& params) {
  CheckBins(model.num_bins, params);
  Spectrogram spec = Analyze(outer, params);
  CheckLabels(labels, spec.num_frames(), model.num_phonemes);
  RtfSmoother smoother(model.num_bins, model.smoothing_alpha);
  for (std::size_t l = 0; l < spec.num_frames(); ++l) {
    const auto rtf = smoother.Next(model.RtfFor(labels[l]));
    auto frame = spec.frame(l);
    for (std::size_t k = 0; k < frame.size(); ++k) frame[k] *= rtf[k];
  }
  return Synthesize(spec);
}

}  // namespace ownvoice
