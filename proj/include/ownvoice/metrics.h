// include/ownvoice/metrics.h

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

#ifndef OWNVOICE_METRICS_H_
#define OWNVOICE_METRICS_H_

#include <span>
#include <vector>

#include "ownvoice/stft.h"

namespace ownvoice {

// Magnitude floor for LSD, relative to each signal's peak STFT magnitude.
inline constexpr double kDefaultLsdFloor = 1e-8;

// Mel-cepstrum parameters for MCD. Band energies are floored at
// log_floor times the signal's largest band energy before the log, so
// scaling a signal never moves its floor relative to its content.
struct MelConfig {
  int num_bands = 20;
  int num_cepstra = 13;  // c_1 .. c_D enter the distance, c_0 does not
  double fmin = 0.0;
  double fmax = 2500.0;
  double log_floor = 1e-10;

  static MelConfig ForSampleRate(double sample_rate);

  void Validate(double sample_rate) const;
};

// Mean over frames of the RMS (over bins) dB difference between the two
// magnitude spectra.
double LogSpectralDistance(std::span<const double> reference,
                           std::span<const double> estimate,
                           const FrameParams& params,
                           double floor = kDefaultLsdFloor);

// Mean over frames of (10 / ln 10) * sqrt(2 * sum_d (c_d - c'_d)^2),
// d = 1 .. num_cepstra, with orthonormal DCT-II cepstra of natural-log
// mel band energies.
double MelCepstralDistance(std::span<const double> reference,
                           std::span<const double> estimate,
                           const FrameParams& params, const MelConfig& mel);

// Triangular filters on the HTK mel scale, evaluated at the one-sided
// STFT bin frequencies. num_bands rows of num_bins weights.
std::vector<std::vector<double>> MelFilterbank(const FrameParams& params,
                                               const MelConfig& mel);

}  // namespace ownvoice

#endif  // OWNVOICE_METRICS_H_
