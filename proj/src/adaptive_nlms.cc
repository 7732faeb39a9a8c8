// src/adaptive_nlms.cc

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

#include "ownvoice/adaptive_nlms.h"

#include <cmath>
#include <numeric>
#include <string>

#include "ownvoice/error.h"

namespace ownvoice {
namespace {

void CheckFinite(std::span<const double> signal, const char* name) {
  for (double x : signal) {
    if (!std::isfinite(x)) {
      Fail(ErrorCategory::kInvalidArgument,
           std::string(name) + " has non-finite samples");
    }
  }
}

}  // namespace

void NlmsConfig::Validate() const {
  if (filter_length < 1) {
    Fail(ErrorCategory::kInvalidArgument, "NLMS filter length must be >= 1");
  }
  if (!(step_size >= 0.0 && step_size < 2.0)) {
    Fail(ErrorCategory::kInvalidArgument,
         "NLMS step size must lie in [0, 2) for stability");
  }
  if (!(regularization > 0.0)) {
    Fail(ErrorCategory::kInvalidArgument,
         "NLMS regularization must be positive");
  }
}

TapDelayLine::TapDelayLine(int length)
    : length_(static_cast<std::size_t>(length)), buffer_(2 * length_, 0.0) {}

void TapDelayLine::Push(double sample) {
  pos_ = pos_ == 0 ? length_ - 1 : pos_ - 1;
  buffer_[pos_] = sample;
  buffer_[pos_ + length_] = sample;
}

NlmsFilter::NlmsFilter(const NlmsConfig& config)
    : config_(config), coefficients_(config.filter_length, 0.0) {
  config_.Validate();
}

double NlmsFilter::Filter(std::span<const double> regressor) const {
  return std::inner_product(coefficients_.begin(), coefficients_.end(),
                            regressor.begin(), 0.0);
}

double NlmsFilter::Adapt(std::span<const double> regressor, double desired) {
  const double error = desired - Filter(regressor);
  const double energy =
      std::inner_product(regressor.begin(), regressor.end(), regressor.begin(),
                         0.0);
  const double gain = config_.step_size / (config_.regularization + energy) *
                      error;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    coefficients_[i] += gain * regressor[i];
  }
  return error;
}

NlmsRunResult NlmsIdentifyAndSimulate(std::span<const double> outer_id,
                                      std::span<const double> inear_id,
                                      std::span<const double> outer_replay,
                                      const NlmsConfig& config) {
  config.Validate();
  if (outer_id.size() != inear_id.size()) {
    Fail(ErrorCategory::kShapeMismatch,
         "NLMS identification signals differ in length");
  }
  if (outer_replay.size() != outer_id.size()) {
    Fail(ErrorCategory::kShapeMismatch,
         "NLMS replay input must match the identification length");
  }
  CheckFinite(outer_id, "outer identification signal");
  CheckFinite(inear_id, "in-ear identification signal");
  CheckFinite(outer_replay, "replay signal");

  const std::size_t length = outer_id.size();
  NlmsRunResult result;
  result.simulated.resize(length);
  result.adaptation_output.resize(length);
  result.error.resize(length);

  NlmsFilter filter(config);
  TapDelayLine identify_taps(config.filter_length);
  TapDelayLine replay_taps(config.filter_length);
  for (std::size_t n = 0; n < length; ++n) {
    identify_taps.Push(outer_id[n]);
    replay_taps.Push(outer_replay[n]);
    // Replay output first: the update below must not leak into sample n.
    result.simulated[n] = filter.Filter(replay_taps.view());
    result.adaptation_output[n] = filter.Filter(identify_taps.view());
    result.error[n] = filter.Adapt(identify_taps.view(), inear_id[n]);
  }
  result.final_coefficients = filter.coefficients();
  return result;
}

std::vector<double> MatchLength(std::span<const double> signal,
                                std::size_t target_length,
                                std::span<const std::vector<double>> pool) {
  if (target_length == 0) {
    Fail(ErrorCategory::kInvalidArgument, "target length must be positive");
  }
  if (signal.size() >= target_length) {
    return {signal.begin(), signal.begin() + target_length};
  }
  std::size_t pool_samples = 0;
  for (const auto& filler : pool) pool_samples += filler.size();
  if (pool_samples == 0) {
    Fail(ErrorCategory::kInvalidArgument,
         "no filler material to extend a signal of " +
             std::to_string(signal.size()) + " samples to " +
             std::to_string(target_length));
  }
  std::vector<double> out(signal.begin(), signal.end());
  out.reserve(target_length);
  for (std::size_t i = 0; out.size() < target_length; i = (i + 1) % pool.size()) {
    const auto& filler = pool[i];
    const std::size_t take =
        std::min(filler.size(), target_length - out.size());
    out.insert(out.end(), filler.begin(), filler.begin() + take);
  }
  return out;
}

}  // namespace ownvoice
