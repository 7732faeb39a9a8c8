// src/stft.cc

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

#include "ownvoice/stft.h"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "ownvoice/error.h"

namespace ownvoice {
namespace {

// FFTW planning is not thread-safe, execution with the new-array interface
// is. Plans are created once per size under a lock and never destroyed.
struct FftPlans {
  fftw_plan forward;
  fftw_plan inverse;
};

const FftPlans& PlansFor(int size) {
  static std::mutex mutex;
  static std::map<int, FftPlans> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(size);
  if (it != cache.end()) return it->second;

  std::vector<double> real(size);
  std::vector<Complex> spectrum(size / 2 + 1);
  auto* freq = reinterpret_cast<fftw_complex*>(spectrum.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  FftPlans plans{fftw_plan_dft_r2c_1d(size, real.data(), freq, flags),
                 fftw_plan_dft_c2r_1d(size, freq, real.data(), flags)};
  if (plans.forward == nullptr || plans.inverse == nullptr) {
    Fail(ErrorCategory::kInvalidArgument,
         "cannot plan FFT of size " + std::to_string(size));
  }
  return cache.emplace(size, plans).first->second;
}

}  // namespace

FrameParams FrameParams::ForFrameLength(int frame_length, double sample_rate) {
  FrameParams params;
  params.frame_length = frame_length;
  params.hop = frame_length / 2;
  params.sample_rate = sample_rate;
  params.Validate();
  return params;
}

void FrameParams::Validate() const {
  if (frame_length < 2 || frame_length % 2 != 0) {
    Fail(ErrorCategory::kInvalidArgument,
         "frame length must be even and >= 2, got " +
             std::to_string(frame_length));
  }
  if (hop != frame_length / 2) {
    Fail(ErrorCategory::kInvalidArgument,
         "hop must be half the frame length (50% overlap)");
  }
  if (!(sample_rate > 0.0)) {
    Fail(ErrorCategory::kInvalidArgument, "sample rate must be positive");
  }
}

std::size_t NumFrames(std::size_t num_samples, const FrameParams& params) {
  const auto hop = static_cast<std::size_t>(params.hop);
  return (num_samples + hop - 1) / hop;
}

Spectrogram::Spectrogram(const FrameParams& params, std::size_t num_frames,
                         std::size_t num_samples)
    : params_(params),
      num_bins_(static_cast<std::size_t>(params.num_bins())),
      num_frames_(num_frames),
      num_samples_(num_samples),
      data_(num_bins_ * num_frames) {
  params_.Validate();
}

Spectrogram::Spectrogram(const FrameParams& params, std::size_t num_bins,
                         std::size_t num_frames, std::size_t num_samples,
                         std::vector<Complex> data)
    : params_(params),
      num_bins_(num_bins),
      num_frames_(num_frames),
      num_samples_(num_samples),
      data_(std::move(data)) {
  params_.Validate();
  if (num_bins_ != static_cast<std::size_t>(params_.num_bins())) {
    Fail(ErrorCategory::kShapeMismatch,
         "spectrogram has " + std::to_string(num_bins_) +
             " bins, frame length " + std::to_string(params_.frame_length) +
             " requires " + std::to_string(params_.num_bins()));
  }
  if (data_.size() != num_bins_ * num_frames_) {
    Fail(ErrorCategory::kShapeMismatch, "spectrogram data size mismatch");
  }
}

std::vector<double> MakeWindow(const FrameParams& params) {
  params.Validate();
  const int size = params.frame_length;
  std::vector<double> window(size);
  for (int n = 0; n < size; ++n) {
    const double hann =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * n / size));
    window[n] = std::sqrt(hann);
  }
  return window;
}

Spectrogram Analyze(std::span<const double> signal,
                    const FrameParams& params) {
  params.Validate();
  if (signal.empty()) {
    Fail(ErrorCategory::kInvalidArgument, "cannot analyze an empty signal");
  }
  for (double x : signal) {
    if (!std::isfinite(x)) {
      Fail(ErrorCategory::kInvalidArgument, "signal has non-finite samples");
    }
  }

  const std::size_t size = params.frame_length;
  const std::size_t hop = params.hop;
  const std::vector<double> window = MakeWindow(params);
  const FftPlans& plans = PlansFor(params.frame_length);

  Spectrogram spec(params, NumFrames(signal.size(), params), signal.size());
  std::vector<double> buffer(size);
  for (std::size_t l = 0; l < spec.num_frames(); ++l) {
    const std::size_t start = l * hop;
    for (std::size_t n = 0; n < size; ++n) {
      const std::size_t t = start + n;
      buffer[n] = t < signal.size() ? signal[t] * window[n] : 0.0;
    }
    auto out = spec.frame(l);
    fftw_execute_dft_r2c(plans.forward, buffer.data(),
                         reinterpret_cast<fftw_complex*>(out.data()));
  }
  return spec;
}

std::vector<double> Synthesize(const Spectrogram& spec) {
  const FrameParams& params = spec.params();
  const std::size_t size = params.frame_length;
  const std::size_t hop = params.hop;
  const std::vector<double> window = MakeWindow(params);
  const FftPlans& plans = PlansFor(params.frame_length);
  const double scale = 1.0 / static_cast<double>(size);

  std::vector<double> out(spec.num_samples(), 0.0);
  std::vector<Complex> bins(spec.num_bins());
  std::vector<double> buffer(size);
  for (std::size_t l = 0; l < spec.num_frames(); ++l) {
    // c2r overwrites its input.
    auto frame = spec.frame(l);
    bins.assign(frame.begin(), frame.end());
    // Imaginary parts of DC and Nyquist are not representable in a real
    // signal; c2r ignores them.
    fftw_execute_dft_c2r(plans.inverse,
                         reinterpret_cast<fftw_complex*>(bins.data()),
                         buffer.data());
    const std::size_t start = l * hop;
    for (std::size_t n = 0; n < size && start + n < out.size(); ++n) {
      out[start + n] += buffer[n] * scale * window[n];
    }
  }
  return out;
}

}  // namespace ownvoice
