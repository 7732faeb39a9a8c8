// tests/acceptance_test.cc

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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Usage: acceptance_test <work-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ownvoice/adaptive_nlms.h"
#include "ownvoice/error.h"
#include "ownvoice/eval_harness.h"
#include "ownvoice/metrics.h"
#include "ownvoice/model_io.h"
#include "ownvoice/phoneme_labels.h"
#include "ownvoice/rtf_models.h"
#include "ownvoice/stft.h"
#include "ownvoice/synth_oracle.h"
#include "ownvoice/wav_io.h"

namespace ownvoice {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Criterion 1.
constexpr double kRoundTripTolerance = 1e-6;   // of peak
constexpr double kRoundTripSeconds = 1.0;
// Criteria 2 and 3.
constexpr double kResponseTolerance = 0.01;    // relative
constexpr double kExcitedPower = 1e-6;         // of peak bin power
constexpr double kOrthogonality = 1e-9;        // relative per bin
// Criterion 4.
constexpr double kSmoothingTolerance = 1e-15;  // absolute
// Criterion 5.
constexpr double kGainTolerance = 0.01;        // relative
constexpr std::size_t kStabilitySamples = 1000000;
// Criterion 6.
constexpr double kTenfoldLsd = 20.0;
constexpr double kTenfoldLsdTolerance = 0.1;
constexpr double kMcdGainTolerance = 1e-6;
// Criterion 7.
constexpr double kNearlyAsWell = 0.5;          // |SD - adaptive| / (SI - SD)
constexpr double kAdaptiveDegradation = 2.0;   // mismatch / matched
constexpr double kMismatchStability = 0.10;    // relative change of SD and SI
constexpr double kSuiteSeconds = 300.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string Format(const char* fmt, double a = 0, double b = 0, double c = 0,
                   double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

std::vector<double> WhiteNoise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = normal(rng);
  return x;
}

std::vector<double> Fir(std::span<const double> taps, std::span<const double> x) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    for (std::size_t j = 0; j < taps.size() && j <= n; ++j) y[n] += taps[j] * x[n - j];
  }
  return y;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

const FrameParams kFrame = FrameParams::ForFrameLength(128, 5000.0);

Outcome StftRoundTrip() {
  Outcome out;
  double worst = 0.0, slowest = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto x = WhiteNoise(5000 * seed + 17, seed);
    const auto t0 = Clock::now();
    const auto y = Synthesize(Analyze(x, kFrame));
    slowest = std::max(slowest, std::chrono::duration<double>(Clock::now() - t0).count());
    double peak = 0.0, err = 0.0;
    for (double v : x) peak = std::max(peak, std::abs(v));
    for (std::size_t n = kFrame.frame_length; n + kFrame.frame_length < x.size(); ++n) {
      err = std::max(err, std::abs(x[n] - y[n]));
    }
    worst = std::max(worst, err / peak);
  }
  out.pass = worst <= kRoundTripTolerance && slowest < kRoundTripSeconds;
  out.detail = Format("max interior error %.2e of peak, slowest %.4f s", worst, slowest);
  return out;
}

Outcome StaticRecovery() {
  Outcome out;
  double worst = 0.0, worst_ortho = 0.0;
  const std::vector<std::vector<double>> filters{{1.0, -0.25, 0.1, 0.05},
                                                 {0.6, 0.15, -0.05}};
  for (std::size_t f = 0; f < filters.size(); ++f) {
    const auto x = WhiteNoise(100000, 10 + f);
    const auto yo = Analyze(x, kFrame);
    const auto yi = Analyze(Fir(filters[f], x), kFrame);
    RtfAccumulator acc(1, kFrame.num_bins());
    acc.AccumulatePooled(yo, yi);
    const auto rtf = FinalizeSpeechIndependent(acc).rtf;
    const auto truth = FrequencyResponse(filters[f], kFrame);
    const double peak = acc.MaxPower();
    for (int k = 0; k < kFrame.num_bins(); ++k) {
      const int row = acc.pooled_row();
      if (acc.power(row)[k] < kExcitedPower * peak) continue;
      worst = std::max(worst, std::abs(rtf[k] - truth[k]) / std::abs(truth[k]));
      Complex ortho{};
      double scale = 0.0;
      for (std::size_t l = 0; l < yo.num_frames(); ++l) {
        ortho += (yi(k, l) - rtf[k] * yo(k, l)) * std::conj(yo(k, l));
        scale += std::abs(yi(k, l) * std::conj(yo(k, l)));
      }
      worst_ortho = std::max(worst_ortho, std::abs(ortho) / scale);
    }
  }
  out.pass = worst <= kResponseTolerance && worst_ortho <= kOrthogonality;
  out.detail = Format("max response error %.2e, max residual correlation %.2e", worst,
                      worst_ortho);
  return out;
}

Outcome PhonemeRecovery(const fs::path& work) {
  Outcome out;
  SynthSpec spec;
  spec.num_talkers = 1;
  spec.num_phonemes = 5;
  spec.excitation = Excitation::kWhiteNoise;
  spec.utterances_per_talker = 15;
  spec.utterance_length = 20000;  // 15 x 4 s = 60 s
  spec.identify_fraction = 1.0;
  // Frames straddling a phoneme boundary mix two systems; long spans, a
  // constant excitation level and a moderate gain spread keep that bias
  // well under the tolerance.
  spec.max_span_frames = 96;
  spec.min_span_level = 1.0;
  spec.silence_level = 1.0;
  spec.min_gain = 0.8;
  spec.max_gain = 1.25;
  const fs::path dir = work / "phoneme_corpus";
  fs::remove_all(dir);
  const GroundTruth truth = GenerateCorpus(spec, dir);
  const Manifest m = LoadManifest(dir / "manifest.json");
  HarnessConfig config;
  const RtfAccumulator acc = AccumulateTalker(m, truth.talkers[0], config);
  const SpeechDependentModel sd =
      FinalizeSpeechDependent(acc, kDefaultFallbackMinFrames, kDefaultSmoothingAlpha);

  double worst = 0.0;
  bool all_valid = true;
  int fewest_row = 0;
  for (int p = 0; p < spec.num_phonemes; ++p) {
    all_valid = all_valid && sd.valid[p];
    if (acc.frame_count(p) < acc.frame_count(fewest_row)) fewest_row = p;
    const auto want = FrequencyResponse(truth.filters[0][p], kFrame);
    const auto got = sd.RtfFor(p);
    const double peak = *std::max_element(acc.power(p).begin(), acc.power(p).end());
    for (int k = 0; k < kFrame.num_bins(); ++k) {
      if (acc.power(p)[k] < kExcitedPower * peak) continue;
      worst = std::max(worst, std::abs(got[k] - want[k]) / std::abs(want[k]));
    }
  }
  // Raising the threshold above the rarest phoneme's count must flag it.
  const int threshold = acc.frame_count(fewest_row) + 1;
  const SpeechDependentModel strict = FinalizeSpeechDependent(acc, threshold, 0.8);
  bool fallback_ok = !strict.valid[fewest_row];
  const auto served = strict.RtfFor(fewest_row);
  fallback_ok = fallback_ok &&
                std::equal(served.begin(), served.end(), strict.fallback.rtf.begin());
  for (int p = 0; p < spec.num_phonemes; ++p) {
    if (acc.frame_count(p) >= threshold) fallback_ok = fallback_ok && strict.valid[p];
  }
  out.pass = all_valid && worst <= kResponseTolerance && fallback_ok;
  out.detail = Format("max response error %.2e over 5 phonemes; above a %g-frame "
                      "threshold the rarest phoneme ",
                      worst, threshold);
  out.detail += fallback_ok ? "falls back and is flagged" : "does not fall back";
  return out;
}

Outcome Smoothing() {
  SpeechDependentModel m;
  m.num_phonemes = 2;
  m.num_bins = kFrame.num_bins();
  m.rtf_table.assign(m.num_bins, 0.0);
  m.rtf_table.insert(m.rtf_table.end(), m.num_bins, 1.0);
  m.valid = {true, true};
  m.fallback.rtf.assign(m.num_bins, 0.5);
  m.smoothing_alpha = 0.8;
  const FrameLabels labels{0, 0, 0, 1, 1, 1, 1};
  const auto traj = SmoothedRtfTrajectory(m, labels);
  const double expected[] = {0.2, 0.36, 0.488};
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (const Complex& h : traj[3 + i]) worst = std::max(worst, std::abs(h - expected[i]));
  }
  m.smoothing_alpha = 0.0;
  bool raw_ok = true;
  const auto raw = SmoothedRtfTrajectory(m, {0, 1, 0, 0, 1, 1, 0});
  const FrameLabels raw_labels{0, 1, 0, 0, 1, 1, 0};
  for (std::size_t l = 0; l < raw.size(); ++l) {
    const auto want = m.RtfFor(raw_labels[l]);
    raw_ok = raw_ok && std::equal(want.begin(), want.end(), raw[l].begin());
  }
  Outcome out;
  out.pass = worst <= kSmoothingTolerance && raw_ok;
  out.detail = Format("max deviation from 0.2/0.36/0.488 is %.1e, alpha=0 ", worst) +
               (raw_ok ? "reproduces raw RTFs exactly" : "differs from raw RTFs");
  return out;
}

Outcome Nlms() {
  const NlmsConfig config;
  const double g = 0.7;
  const auto n = static_cast<std::size_t>(50 * config.filter_length / config.step_size);
  const auto x = WhiteNoise(n, 21);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = g * x[i];
  const auto run = NlmsIdentifyAndSimulate(x, d, x, config);
  const double gain_error = std::abs(run.final_coefficients[0] - g) / g;
  const bool replay = run.simulated == run.adaptation_output;

  bool bounded = true;
  double largest = 0.0;
  const auto xs = WhiteNoise(kStabilitySamples, 22);
  const auto ds = WhiteNoise(kStabilitySamples, 23);
  for (double mu : {0.1, 0.5, 1.5}) {
    const auto r = NlmsIdentifyAndSimulate(xs, ds, xs, NlmsConfig{128, mu, 1e-6});
    for (double c : r.final_coefficients) {
      bounded = bounded && std::isfinite(c);
      largest = std::max(largest, std::abs(c));
    }
    for (double y : r.simulated) bounded = bounded && std::isfinite(y);
  }
  Outcome out;
  out.pass = gain_error <= kGainTolerance && replay && bounded;
  out.detail = Format("tap-0 error %.2e after 50N/mu samples, largest |h| over 1e6 "
                      "samples %.3f, replay ",
                      gain_error, largest) +
               (replay ? "bit-exact" : "differs");
  return out;
}

Outcome Metrics() {
  const MelConfig mel = MelConfig::ForSampleRate(5000.0);
  const auto x = WhiteNoise(10000, 31);
  const auto y = WhiteNoise(10000, 32);
  std::vector<double> tenfold(x), scaled(x);
  for (double& v : tenfold) v *= 10.0;
  for (double& v : scaled) v *= 0.37;
  const bool zero = LogSpectralDistance(x, x, kFrame) == 0.0 &&
                    MelCepstralDistance(x, x, kFrame, mel) == 0.0;
  const double lsd10 = LogSpectralDistance(x, tenfold, kFrame);
  const double mcd_gain = std::max(MelCepstralDistance(x, tenfold, kFrame, mel),
                                   MelCepstralDistance(x, scaled, kFrame, mel));
  const bool symmetric =
      LogSpectralDistance(x, y, kFrame) == LogSpectralDistance(y, x, kFrame) &&
      MelCepstralDistance(x, y, kFrame, mel) == MelCepstralDistance(y, x, kFrame, mel);
  Outcome out;
  out.pass = zero && std::abs(lsd10 - kTenfoldLsd) <= kTenfoldLsdTolerance &&
             mcd_gain <= kMcdGainTolerance && symmetric;
  out.detail = Format("LSD(x,10x)=%.6f dB, MCD under gain %.1e, ", lsd10, mcd_gain) +
               (zero ? "self-distance 0, " : "self-distance non-zero, ") +
               (symmetric ? "symmetric" : "asymmetric");
  return out;
}

constexpr ConditionKind kConditions[] = {ConditionKind::kMatched,
                                         ConditionKind::kUtteranceMismatch,
                                         ConditionKind::kTalkerMismatch};

EvalReport RunPipeline(const SynthSpec& spec, const fs::path& dir, int jobs,
                       std::uint64_t assignment_seed) {
  fs::remove_all(dir);
  GenerateCorpus(spec, dir / "corpus");
  const Manifest m = LoadManifest(dir / "corpus" / "manifest.json");
  HarnessConfig config;
  config.jobs = jobs;
  IdentifyModels(m, {std::begin(kAllModelKinds), std::end(kAllModelKinds)}, config,
                 dir / "models");
  std::vector<EvalReport> parts;
  for (ConditionKind c : kConditions) {
    SimulateCondition(m, dir / "models", EvalCondition::AllKinds(c, assignment_seed),
                      config, dir / "sim");
    parts.push_back(EvaluateCondition(m, dir / "sim", c, config));
  }
  EvalReport report = CombineReports(parts);
  SaveReport(dir / "report.json", report);
  return report;
}

SynthSpec OrderingCorpus() {
  SynthSpec spec;
  spec.seed = 1;
  spec.num_talkers = 3;
  spec.perturbation_scale = 0.2;
  spec.utterances_per_talker = 40;
  spec.utterance_length = 50000;
  spec.max_span_frames = 24;
  return spec;
}

Outcome Ordering(const fs::path& work, Clock::time_point suite_start) {
  const EvalReport report = RunPipeline(OrderingCorpus(), work / "ordering", 1, 1);
  std::vector<std::string> failures;
  std::string numbers;
  for (int metric = 0; metric < 2; ++metric) {
    const char* name = metric == 0 ? "LSD" : "MCD";
    auto mean = [&](ConditionKind c, ModelKind k) {
      const Aggregate* a = report.Find(c, k);
      return a == nullptr ? NAN : (metric == 0 ? a->lsd.mean : a->mcd.mean);
    };
    const double si = mean(ConditionKind::kMatched, ModelKind::kSiIndividual);
    const double sd = mean(ConditionKind::kMatched, ModelKind::kSdIndividual);
    const double ad = mean(ConditionKind::kMatched, ModelKind::kAdaptive);
    const double ad_u = mean(ConditionKind::kUtteranceMismatch, ModelKind::kAdaptive);
    const double si_u = mean(ConditionKind::kUtteranceMismatch, ModelKind::kSiIndividual);
    const double sd_u = mean(ConditionKind::kUtteranceMismatch, ModelKind::kSdIndividual);
    auto fail = [&](const std::string& what) { failures.push_back(std::string(name) + " " + what); };
    if (!(sd < si)) fail("matched SD >= SI");
    if (!(std::abs(sd - ad) <= kNearlyAsWell * (si - sd))) fail("matched SD far from adaptive");
    if (!(ad_u > kAdaptiveDegradation * ad)) fail("adaptive does not degrade");
    if (!(std::abs(sd_u / sd - 1.0) <= kMismatchStability)) fail("SD unstable under utterance mismatch");
    if (!(std::abs(si_u / si - 1.0) <= kMismatchStability)) fail("SI unstable under utterance mismatch");
    const double best = mean(ConditionKind::kTalkerMismatch, ModelKind::kSdAveraged);
    for (ModelKind k : kAllModelKinds) {
      if (k != ModelKind::kSdAveraged &&
          !(best < mean(ConditionKind::kTalkerMismatch, k))) {
        fail("SD-averaged not best under talker mismatch");
        break;
      }
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%s: matched SI %.3f SD %.3f adaptive %.3f; utt-mismatch SI %.3f SD "
                  "%.3f adaptive %.3f; talker-mismatch SD-avg %.3f. ",
                  name, si, sd, ad, si_u, sd_u, ad_u, best);
    numbers += buf;
  }
  const double elapsed = std::chrono::duration<double>(Clock::now() - suite_start).count();
  if (!(elapsed < kSuiteSeconds)) failures.push_back("suite too slow");
  Outcome out;
  out.pass = failures.empty();
  out.detail = numbers + Format("Elapsed %.1f s.", elapsed);
  for (const auto& f : failures) out.detail += " [" + f + "]";
  return out;
}

Outcome Determinism(const fs::path& work) {
  SynthSpec spec;
  spec.num_talkers = 3;
  spec.utterances_per_talker = 4;
  spec.utterance_length = 10000;
  const fs::path a = work / "determinism_a", b = work / "determinism_b";
  RunPipeline(spec, a, 1, 5);
  RunPipeline(spec, b, 2, 5);
  std::size_t compared = 0, differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a);
    const auto top = rel.begin()->string();
    if (top != "models" && top != "sim" && top != "report.json") continue;
    ++compared;
    if (Slurp(entry.path()) != Slurp(b / rel)) ++differing;
  }
  Outcome out;
  out.pass = compared > 0 && differing == 0;
  out.detail = Format("%g model, simulation and report files compared across two runs "
                      "(1 and 2 threads), %g differ",
                      static_cast<double>(compared), static_cast<double>(differing));
  return out;
}

Outcome InputOutput(const fs::path& work) {
  // Model round trip.
  TransferModel model;
  SpeechDependentModel sd;
  sd.num_phonemes = 3;
  sd.num_bins = kFrame.num_bins();
  sd.valid = {true, false, true};
  std::mt19937_64 rng(41);
  std::normal_distribution<double> n(0.0, 1.0);
  sd.rtf_table.resize(3 * sd.num_bins);
  for (Complex& c : sd.rtf_table) c = {n(rng), n(rng)};
  sd.fallback.rtf.resize(sd.num_bins);
  for (Complex& c : sd.fallback.rtf) c = {n(rng), n(rng)};
  model.body = sd;
  const fs::path model_path = work / "io.model";
  SaveModel(model_path, model);
  const bool model_ok = LoadModel(model_path) == model;

  // Raw PCM16 file holding 16384.
  const fs::path wav_path = work / "half.wav";
  {
    std::ofstream out(wav_path, std::ios::binary);
    auto u32 = [&](std::uint32_t v) { for (int i = 0; i < 4; ++i) out.put(static_cast<char>(v >> (8 * i))); };
    auto u16 = [&](std::uint16_t v) { out.put(static_cast<char>(v)); out.put(static_cast<char>(v >> 8)); };
    out << "RIFF";
    u32(36 + 2);
    out << "WAVEfmt ";
    u32(16); u16(1); u16(1); u32(5000); u32(10000); u16(2); u16(16);
    out << "data";
    u32(2); u16(16384);
  }
  const WavData wav = ReadWav(wav_path);
  const bool pcm_ok = wav.samples.size() == 1 && wav.samples[0] == 0.5;

  // Flip one payload byte.
  std::string bytes = Slurp(model_path);
  bytes[bytes.size() - 50] ^= 0x20;
  {
    std::ofstream out(work / "corrupt.model", std::ios::binary);
    out << bytes;
  }
  bool checksum_ok = false;
  try {
    LoadModel(work / "corrupt.model");
  } catch (const Error& e) {
    checksum_ok = e.category() == ErrorCategory::kChecksum;
  }
  Outcome out;
  out.pass = model_ok && pcm_ok && checksum_ok;
  out.detail = std::string("model round trip ") + (model_ok ? "bit-exact" : "differs") +
               ", PCM16 16384 -> " + Format("%.17g", wav.samples.empty() ? NAN : wav.samples[0]) +
               ", corrupt model " + (checksum_ok ? "rejected by checksum" : "not rejected");
  return out;
}

}  // namespace
}  // namespace ownvoice

int main(int argc, char** argv) {
  using namespace ownvoice;
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <work-dir>\n", argv[0]);
    return 2;
  }
  const fs::path work = argv[1];
  fs::create_directories(work);
  const auto start = Clock::now();

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "STFT round trip", StftRoundTrip},
      {2, "exact-system recovery", StaticRecovery},
      {3, "phoneme recovery", [&] { return PhonemeRecovery(work); }},
      {4, "smoothing recursion", Smoothing},
      {5, "NLMS", Nlms},
      {6, "metrics", Metrics},
      {7, "model ordering on synthetic corpus", [&] { return Ordering(work, start); }},
      {8, "determinism", [&] { return Determinism(work); }},
      {9, "I/O round trips", [&] { return InputOutput(work); }},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failed;
    std::printf("%s  [%d] %s: %s\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
