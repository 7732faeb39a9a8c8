// include/ownvoice/stft.h

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

#ifndef OWNVOICE_STFT_H_
#define OWNVOICE_STFT_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ownvoice {

using Complex = std::complex<double>;

enum class WindowKind { kSqrtHann };

// Framing of the STFT. Frames overlap by exactly 50%, so hop is always
// frame_length / 2; the square-root Hann window is used for both analysis
// and synthesis.
struct FrameParams {
  int frame_length = 128;
  int hop = 64;
  WindowKind window = WindowKind::kSqrtHann;
  double sample_rate = 5000.0;

  static FrameParams ForFrameLength(int frame_length, double sample_rate);

  int num_bins() const { return frame_length / 2 + 1; }

  // Throws Error(kInvalidArgument) unless frame_length is even and >= 2,
  // hop == frame_length / 2 and sample_rate > 0.
  void Validate() const;

  bool operator==(const FrameParams&) const = default;
};

// Number of frames covering `num_samples` samples: frame f starts at
// f * hop, and frames are emitted while the start lies inside the signal.
// The trailing frames are zero-padded.
std::size_t NumFrames(std::size_t num_samples, const FrameParams& params);

// One-sided complex STFT, num_bins() x num_frames(). Stored frame-major.
class Spectrogram {
 public:
  Spectrogram(const FrameParams& params, std::size_t num_frames,
              std::size_t num_samples);
  // `data` holds num_frames blocks of `num_bins` values. Throws
  // kShapeMismatch if num_bins disagrees with params or the data size is
  // wrong.
  Spectrogram(const FrameParams& params, std::size_t num_bins,
              std::size_t num_frames, std::size_t num_samples,
              std::vector<Complex> data);

  const FrameParams& params() const { return params_; }
  std::size_t num_bins() const { return num_bins_; }
  std::size_t num_frames() const { return num_frames_; }
  std::size_t num_samples() const { return num_samples_; }

  Complex& operator()(std::size_t bin, std::size_t frame) {
    return data_[frame * num_bins_ + bin];
  }
  const Complex& operator()(std::size_t bin, std::size_t frame) const {
    return data_[frame * num_bins_ + bin];
  }

  std::span<Complex> frame(std::size_t l) {
    return {data_.data() + l * num_bins_, num_bins_};
  }
  std::span<const Complex> frame(std::size_t l) const {
    return {data_.data() + l * num_bins_, num_bins_};
  }

  const std::vector<Complex>& data() const { return data_; }

 private:
  FrameParams params_;
  std::size_t num_bins_;
  std::size_t num_frames_;
  std::size_t num_samples_;
  std::vector<Complex> data_;
};

// Square root of the periodic Hann window, w[n] = sin(pi n / K). Its square
// sums to exactly one at 50% overlap.
std::vector<double> MakeWindow(const FrameParams& params);

// Forward transform is unnormalized; the inverse carries the 1/K factor.
Spectrogram Analyze(std::span<const double> signal, const FrameParams& params);

// Weighted overlap-add resynthesis, truncated to spec.num_samples(). Every
// sample past the first hop is reconstructed exactly from an unmodified
// spectrogram.
std::vector<double> Synthesize(const Spectrogram& spec);

}  // namespace ownvoice

#endif  // OWNVOICE_STFT_H_
