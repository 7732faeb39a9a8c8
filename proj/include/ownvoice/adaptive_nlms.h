// include/ownvoice/adaptive_nlms.h

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

#ifndef OWNVOICE_ADAPTIVE_NLMS_H_
#define OWNVOICE_ADAPTIVE_NLMS_H_

#include <cstddef>
#include <span>
#include <vector>

namespace ownvoice {

struct NlmsConfig {
  int filter_length = 128;
  double step_size = 0.5;
  double regularization = 1e-6;

  // filter_length >= 1, 0 <= step_size < 2, regularization > 0. A zero
  // step size is accepted and leaves the filter at its zero start.
  void Validate() const;

  bool operator==(const NlmsConfig&) const = default;
};

// Newest-first window over the last `length` input samples. Samples before
// the start of the signal read as zero.
class TapDelayLine {
 public:
  explicit TapDelayLine(int length);

  void Push(double sample);
  std::span<const double> view() const {
    return {buffer_.data() + pos_, length_};
  }

 private:
  std::size_t length_;
  std::size_t pos_ = 0;
  std::vector<double> buffer_;  // two mirrored copies, so view() is contiguous
};

class NlmsFilter {
 public:
  explicit NlmsFilter(const NlmsConfig& config);

  // h^T x for a newest-first regressor of filter_length samples.
  double Filter(std::span<const double> regressor) const;
  // One NLMS step: h += mu / (eps + x^T x) * x * (desired - h^T x).
  // Returns the a-priori error.
  double Adapt(std::span<const double> regressor, double desired);

  const std::vector<double>& coefficients() const { return coefficients_; }

 private:
  NlmsConfig config_;
  std::vector<double> coefficients_;
};

struct NlmsRunResult {
  std::vector<double> simulated;          // filter applied to the replay input
  std::vector<double> adaptation_output;  // filter applied to its own input
  std::vector<double> error;
  std::vector<double> final_coefficients;
};

// Identifies outer_id -> inear_id sample by sample and, in the same pass,
// applies the current coefficients to `outer_replay`. At sample n both
// outputs use the coefficients produced by the update at n - 1, so
// replaying the identification input reproduces adaptation_output exactly.
NlmsRunResult NlmsIdentifyAndSimulate(std::span<const double> outer_id,
                                      std::span<const double> inear_id,
                                      std::span<const double> outer_replay,
                                      const NlmsConfig& config);

// Cuts `signal` to `target_length`, or extends it with material from
// `pool` taken in order (cycling if needed).
std::vector<double> MatchLength(std::span<const double> signal,
                                std::size_t target_length,
                                std::span<const std::vector<double>> pool);

}  // namespace ownvoice

#endif  // OWNVOICE_ADAPTIVE_NLMS_H_
