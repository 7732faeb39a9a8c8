// include/ownvoice/wav_io.h

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

#ifndef OWNVOICE_WAV_IO_H_
#define OWNVOICE_WAV_IO_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace ownvoice {

enum class WavEncoding { kPcm16, kFloat32 };

struct WavInfo {
  int sample_rate = 0;
  int channels = 0;
  WavEncoding encoding = WavEncoding::kPcm16;
  std::size_t num_samples = 0;  // per channel
};

struct WavData {
  std::vector<double> samples;
  int sample_rate = 0;
};

// Mono RIFF/WAVE, 16-bit PCM or 32-bit IEEE float. PCM samples are scaled
// by 1/32768; float samples pass through unchanged.
WavData ReadWav(const std::filesystem::path& path);
// Header-only probe; does not require mono.
WavInfo ReadWavInfo(const std::filesystem::path& path);

// PCM16 output rounds and saturates; float32 output narrows each sample.
void WriteWav(const std::filesystem::path& path,
              std::span<const double> samples, int sample_rate,
              WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace ownvoice

#endif  // OWNVOICE_WAV_IO_H_
