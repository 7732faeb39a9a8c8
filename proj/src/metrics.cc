// src/metrics.cc

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

#include "ownvoice/metrics.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ownvoice/error.h"

namespace ownvoice {
namespace {

void CheckPair(std::span<const double> reference,
               std::span<const double> estimate) {
  if (reference.empty() || estimate.empty()) {
    Fail(ErrorCategory::kInvalidArgument, "metric inputs must be non-empty");
  }
  if (reference.size() != estimate.size()) {
    Fail(ErrorCategory::kShapeMismatch,
         "metric inputs differ in length: " + std::to_string(reference.size()) +
             " vs " + std::to_string(estimate.size()));
  }
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// Floored natural-log mel band energies, frame-major.
std::vector<std::vector<double>> LogMelEnergies(
    const Spectrogram& spec, const std::vector<std::vector<double>>& bank,
    double relative_floor) {
  std::vector<std::vector<double>> energies(
      spec.num_frames(), std::vector<double>(bank.size(), 0.0));
  double peak = 0.0;
  for (std::size_t l = 0; l < spec.num_frames(); ++l) {
    const auto frame = spec.frame(l);
    for (std::size_t b = 0; b < bank.size(); ++b) {
      double energy = 0.0;
      for (std::size_t k = 0; k < frame.size(); ++k) {
        energy += bank[b][k] * std::norm(frame[k]);
      }
      energies[l][b] = energy;
      peak = std::max(peak, energy);
    }
  }
  const double floor = peak > 0.0 ? relative_floor * peak : relative_floor;
  for (auto& frame : energies) {
    for (double& e : frame) e = std::log(std::max(e, floor));
  }
  return energies;
}

}  // namespace

MelConfig MelConfig::ForSampleRate(double sample_rate) {
  MelConfig mel;
  mel.fmax = sample_rate / 2.0;
  return mel;
}

void MelConfig::Validate(double sample_rate) const {
  if (num_cepstra < 1 || num_bands <= num_cepstra) {
    Fail(ErrorCategory::kInvalidArgument,
         "mel config needs num_bands > num_cepstra >= 1");
  }
  if (!(fmin >= 0.0 && fmin < fmax && fmax <= sample_rate / 2.0)) {
    Fail(ErrorCategory::kInvalidArgument,
         "mel config needs 0 <= fmin < fmax <= sample_rate / 2");
  }
  if (!(log_floor > 0.0)) {
    Fail(ErrorCategory::kInvalidArgument, "mel log floor must be positive");
  }
}

std::vector<std::vector<double>> MelFilterbank(const FrameParams& params,
                                               const MelConfig& mel) {
  params.Validate();
  mel.Validate(params.sample_rate);
  const int num_bins = params.num_bins();
  const double mel_low = HzToMel(mel.fmin);
  const double mel_high = HzToMel(mel.fmax);
  std::vector<double> edges(mel.num_bands + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = MelToHz(mel_low + (mel_high - mel_low) * static_cast<double>(i) /
                                     (mel.num_bands + 1));
  }
  std::vector<std::vector<double>> bank(mel.num_bands,
                                        std::vector<double>(num_bins, 0.0));
  for (int b = 0; b < mel.num_bands; ++b) {
    const double left = edges[b], center = edges[b + 1], right = edges[b + 2];
    for (int k = 0; k < num_bins; ++k) {
      const double f = k * params.sample_rate / params.frame_length;
      if (f > left && f <= center) {
        bank[b][k] = (f - left) / (center - left);
      } else if (f > center && f < right) {
        bank[b][k] = (right - f) / (right - center);
      }
    }
  }
  return bank;
}

double LogSpectralDistance(std::span<const double> reference,
                           std::span<const double> estimate,
                           const FrameParams& params, double floor) {
  CheckPair(reference, estimate);
  if (!(floor > 0.0)) {
    Fail(ErrorCategory::kInvalidArgument, "LSD floor must be positive");
  }
  const Spectrogram ref = Analyze(reference, params);
  const Spectrogram est = Analyze(estimate, params);

  auto peak_of = [](const Spectrogram& s) {
    double peak = 0.0;
    for (const Complex& c : s.data()) peak = std::max(peak, std::abs(c));
    return peak;
  };
  const double ref_peak = peak_of(ref);
  const double est_peak = peak_of(est);
  const double ref_floor = ref_peak > 0.0 ? floor * ref_peak : floor;
  const double est_floor = est_peak > 0.0 ? floor * est_peak : floor;

  double total = 0.0;
  for (std::size_t l = 0; l < ref.num_frames(); ++l) {
    const auto a = ref.frame(l);
    const auto b = est.frame(l);
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      // Difference of logs rather than log of a ratio keeps lsd(a, b) and
      // lsd(b, a) bit-identical.
      const double diff = 20.0 * (std::log10(std::abs(a[k]) + ref_floor) -
                                  std::log10(std::abs(b[k]) + est_floor));
      sum += diff * diff;
    }
    total += std::sqrt(sum / static_cast<double>(a.size()));
  }
  return total / static_cast<double>(ref.num_frames());
}

double MelCepstralDistance(std::span<const double> reference,
                           std::span<const double> estimate,
                           const FrameParams& params, const MelConfig& mel) {
  CheckPair(reference, estimate);
  const auto bank = MelFilterbank(params, mel);
  const auto ref = LogMelEnergies(Analyze(reference, params), bank,
                                  mel.log_floor);
  const auto est = LogMelEnergies(Analyze(estimate, params), bank,
                                  mel.log_floor);

  const int bands = mel.num_bands;
  std::vector<std::vector<double>> basis(mel.num_cepstra + 1,
                                         std::vector<double>(bands));
  for (int d = 1; d <= mel.num_cepstra; ++d) {
    for (int b = 0; b < bands; ++b) {
      basis[d][b] = std::sqrt(2.0 / bands) *
                    std::cos(std::numbers::pi * d * (b + 0.5) / bands);
    }
  }

  const double scale = 10.0 / std::numbers::ln10;
  double total = 0.0;
  for (std::size_t l = 0; l < ref.size(); ++l) {
    double sum = 0.0;
    for (int d = 1; d <= mel.num_cepstra; ++d) {
      double c_ref = 0.0, c_est = 0.0;
      for (int b = 0; b < bands; ++b) {
        c_ref += basis[d][b] * ref[l][b];
        c_est += basis[d][b] * est[l][b];
      }
      sum += (c_ref - c_est) * (c_ref - c_est);
    }
    total += scale * std::sqrt(2.0 * sum);
  }
  return total / static_cast<double>(ref.size());
}

}  // namespace ownvoice
