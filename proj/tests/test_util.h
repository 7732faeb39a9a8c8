// tests/test_util.h

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

#ifndef OWNVOICE_TESTS_TEST_UTIL_H_
#define OWNVOICE_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace ownvoice::testing {

inline std::vector<double> WhiteNoise(std::size_t n, std::uint64_t seed,
                                      double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> x(n);
  for (double& v : x) v = normal(rng);
  return x;
}

inline double MaxAbs(std::span<const double> x) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  return peak;
}

// Causal FIR filtering with zero initial state.
inline std::vector<double> FirFilter(std::span<const double> taps,
                                     std::span<const double> x) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    for (std::size_t j = 0; j < taps.size() && j <= n; ++j) {
      y[n] += taps[j] * x[n - j];
    }
  }
  return y;
}

// Fresh, empty directory under the test's working directory.
inline std::filesystem::path ScratchDir(const std::string& name) {
  const auto dir = std::filesystem::current_path() / "scratch" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path Fixture(const std::string& name) {
  return std::filesystem::path(OWNVOICE_FIXTURE_DIR) / name;
}

}  // namespace ownvoice::testing

#endif  // OWNVOICE_TESTS_TEST_UTIL_H_
