// src/synth_oracle.cc

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

#include "ownvoice/synth_oracle.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "json.hpp"
#include "ownvoice/error.h"
#include "ownvoice/manifest.h"
#include "ownvoice/model_io.h"
#include "ownvoice/wav_io.h"

namespace ownvoice {
namespace {

constexpr std::uint64_t kBaseStream = 0xBA5E;
constexpr std::uint64_t kTalkerStream = 0x7A1C;
constexpr std::uint64_t kSegmentStream = 0x5E6;
constexpr std::uint64_t kExcitationStream = 0xE8C;

constexpr double kTailSpread = 0.3;  // total |taps 1..L-1| relative to tap 0
constexpr double kNoiseScale = 0.1;

std::mt19937_64 Stream(std::uint64_t seed, std::uint64_t tag,
                       std::uint64_t a = 0, std::uint64_t b = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag),
                    static_cast<std::uint32_t>(a),
                    static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b),
                    static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

std::string TalkerId(int t) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "t%02d", t + 1);
  return buf;
}

std::string UtteranceId(int u) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "u%03d", u + 1);
  return buf;
}

std::uint64_t UtteranceStream(int talker, int utterance) {
  return (static_cast<std::uint64_t>(talker) << 32) |
         static_cast<std::uint32_t>(utterance);
}

// Excitation for one utterance; level and (for pulse trains) pitch change
// per span.
std::vector<double> DrawOuter(const SynthSpec& spec, const LabelTrack& track,
                              std::uint64_t stream) {
  auto rng = Stream(spec.seed, kExcitationStream, stream);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> level_dist(spec.min_span_level, 1.0);
  std::uniform_int_distribution<int> period_dist(25, 50);

  std::vector<double> outer(track.total_samples, 0.0);
  double lowpass_state = 0.0;
  for (const auto& span : track.spans) {
    double level = level_dist(rng) * kNoiseScale;
    if (span.phoneme == 0) level *= spec.silence_level;
    const int period = period_dist(rng);
    for (std::size_t n = span.start; n < span.end; ++n) {
      double x = 0.0;
      switch (spec.excitation) {
        case Excitation::kWhiteNoise:
          x = normal(rng);
          break;
        case Excitation::kFilteredNoise:
          // One-pole low-pass with unit output variance.
          lowpass_state = 0.9 * lowpass_state + normal(rng);
          x = lowpass_state * std::sqrt(1.0 - 0.81);
          break;
        case Excitation::kPulseTrain:
          x = (n - span.start) % period == 0 ? 4.0 : 0.0;
          break;
      }
      outer[n] = level * x;
    }
  }
  return outer;
}

}  // namespace

std::string_view ExcitationName(Excitation excitation) {
  switch (excitation) {
    case Excitation::kWhiteNoise: return "white-noise";
    case Excitation::kFilteredNoise: return "filtered-noise";
    case Excitation::kPulseTrain: return "pulse-train";
  }
  return "unknown";
}

std::optional<Excitation> ParseExcitation(std::string_view name) {
  for (auto e : {Excitation::kWhiteNoise, Excitation::kFilteredNoise,
                 Excitation::kPulseTrain}) {
    if (ExcitationName(e) == name) return e;
  }
  return std::nullopt;
}

void SynthSpec::Validate() const {
  if (num_talkers < 1 || utterances_per_talker < 1 || num_phonemes < 1 ||
      filter_length < 1 || utterance_length < 1) {
    Fail(ErrorCategory::kInvalidArgument, "synth counts must all be >= 1");
  }
  if (!(perturbation_scale >= 0.0)) {
    Fail(ErrorCategory::kInvalidArgument,
         "perturbation scale must be non-negative");
  }
  if (!(identify_fraction > 0.0 && identify_fraction <= 1.0)) {
    Fail(ErrorCategory::kInvalidArgument,
         "identify fraction must lie in (0, 1]");
  }
  if (!(min_span_level > 0.0 && min_span_level <= 1.0) ||
      !(silence_level > 0.0)) {
    Fail(ErrorCategory::kInvalidArgument,
         "span levels must lie in (0, 1] and silence level must be positive");
  }
  if (!(min_gain > 0.0 && min_gain <= max_gain)) {
    Fail(ErrorCategory::kInvalidArgument, "need 0 < min_gain <= max_gain");
  }
  if (max_span_frames < 4) {
    Fail(ErrorCategory::kInvalidArgument, "max span must be >= 4 frames");
  }
  FrameParams::ForFrameLength(frame_length, sample_rate);
}

std::vector<Complex> FrequencyResponse(std::span<const double> taps,
                                       const FrameParams& params) {
  std::vector<Complex> response(params.num_bins());
  for (std::size_t k = 0; k < response.size(); ++k) {
    Complex sum{};
    for (std::size_t t = 0; t < taps.size(); ++t) {
      const double phase = -2.0 * std::numbers::pi *
                           static_cast<double>(k * t % params.frame_length) /
                           params.frame_length;
      sum += taps[t] * Complex(std::cos(phase), std::sin(phase));
    }
    response[k] = sum;
  }
  return response;
}

GroundTruth DrawFilters(const SynthSpec& spec) {
  spec.Validate();
  const int taps = spec.filter_length;
  const double tail = taps > 1 ? kTailSpread / (taps - 1) : 0.0;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> log_gain(std::log(spec.min_gain),
                                                  std::log(spec.max_gain));

  auto base_rng = Stream(spec.seed, kBaseStream);
  std::vector<double> gains(spec.num_phonemes);
  std::vector<std::vector<double>> base(spec.num_phonemes,
                                        std::vector<double>(taps));
  for (int p = 0; p < spec.num_phonemes; ++p) {
    gains[p] = std::exp(log_gain(base_rng));
    base[p][0] = gains[p];
    for (int t = 1; t < taps; ++t) base[p][t] = gains[p] * tail * unit(base_rng);
  }

  GroundTruth truth;
  for (int a = 0; a < spec.num_talkers; ++a) {
    truth.talkers.push_back(TalkerId(a));
    auto rng = Stream(spec.seed, kTalkerStream, static_cast<std::uint64_t>(a));
    auto filters = base;
    for (int p = 0; p < spec.num_phonemes; ++p) {
      const double scale = spec.perturbation_scale * gains[p];
      filters[p][0] += scale * unit(rng);
      for (int t = 1; t < taps; ++t) filters[p][t] += scale * tail * unit(rng);
    }
    truth.filters.push_back(std::move(filters));
  }
  return truth;
}

LabelTrack DrawSegmentation(const SynthSpec& spec, std::uint64_t stream) {
  auto rng = Stream(spec.seed, kSegmentStream, stream);
  const std::size_t frame = spec.frame_length;
  const std::size_t min_span = 4 * frame;
  std::uniform_int_distribution<std::size_t> length_dist(
      min_span, static_cast<std::size_t>(spec.max_span_frames) * frame);
  std::uniform_int_distribution<int> phoneme_dist(0, spec.num_phonemes - 1);

  LabelTrack track;
  track.total_samples = spec.utterance_length;
  std::size_t cursor = 0;
  int previous = -1;
  while (cursor < spec.utterance_length) {
    std::size_t end = std::min(cursor + length_dist(rng), spec.utterance_length);
    // A short remainder is absorbed by the current span.
    if (spec.utterance_length - end < min_span) end = spec.utterance_length;
    int phoneme = phoneme_dist(rng);
    if (spec.num_phonemes > 1) {
      while (phoneme == previous) phoneme = phoneme_dist(rng);
    }
    track.spans.push_back({cursor, end, phoneme});
    previous = phoneme;
    cursor = end;
  }
  return track;
}

std::vector<double> RenderInEar(
    std::span<const double> outer, const LabelTrack& track,
    const std::vector<std::vector<double>>& filters, std::size_t crossfade) {
  if (track.total_samples != outer.size()) {
    Fail(ErrorCategory::kShapeMismatch, "label track does not match signal");
  }
  auto convolve_at = [&](const std::vector<double>& taps, std::size_t n) {
    double sum = 0.0;
    for (std::size_t t = 0; t < taps.size() && t <= n; ++t) {
      sum += taps[t] * outer[n - t];
    }
    return sum;
  };

  std::vector<double> inear(outer.size());
  const std::size_t half = crossfade / 2;
  for (std::size_t s = 0; s < track.spans.size(); ++s) {
    const auto& span = track.spans[s];
    const auto& taps = filters.at(span.phoneme);
    for (std::size_t n = span.start; n < span.end; ++n) {
      inear[n] = convolve_at(taps, n);
    }
  }
  if (crossfade == 0) return inear;
  for (std::size_t s = 1; s < track.spans.size(); ++s) {
    const std::size_t boundary = track.spans[s].start;
    const auto& before = filters.at(track.spans[s - 1].phoneme);
    const auto& after = filters.at(track.spans[s].phoneme);
    const long long start = static_cast<long long>(boundary) -
                            static_cast<long long>(half);
    const long long stop = std::min<long long>(
        start + static_cast<long long>(crossfade),
        static_cast<long long>(outer.size()));
    for (long long n = std::max<long long>(start, 0); n < stop; ++n) {
      const double ramp = (static_cast<double>(n - start) + 0.5) /
                          static_cast<double>(crossfade);
      inear[n] = (1.0 - ramp) * convolve_at(before, n) +
                 ramp * convolve_at(after, n);
    }
  }
  return inear;
}

GroundTruth GenerateCorpus(const SynthSpec& spec,
                           const std::filesystem::path& out_dir) {
  spec.Validate();
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    Fail(ErrorCategory::kIo, "cannot create output directory " +
                                 out_dir.string());
  }

  const GroundTruth truth = DrawFilters(spec);
  const PhonemeInventory inventory = PhonemeInventory::Generic(spec.num_phonemes);
  const FrameParams frame =
      FrameParams::ForFrameLength(spec.frame_length, spec.sample_rate);

  Manifest manifest;
  manifest.sample_rate = spec.sample_rate;
  manifest.inventory_path = out_dir / "inventory.txt";
  {
    std::ofstream inv(manifest.inventory_path);
    if (!inv) Fail(ErrorCategory::kIo, "cannot write inventory");
    inventory.Write(inv);
  }

  const int num_identify = std::max(
      1, static_cast<int>(std::lround(spec.identify_fraction *
                                      spec.utterances_per_talker)));
  for (int a = 0; a < spec.num_talkers; ++a) {
    const std::string& talker = truth.talkers[a];
    fs::create_directories(out_dir / "audio" / talker);
    fs::create_directories(out_dir / "labels" / talker);
    for (int u = 0; u < spec.utterances_per_talker; ++u) {
      const std::uint64_t stream = UtteranceStream(a, u);
      const LabelTrack track = DrawSegmentation(spec, stream);
      std::vector<double> outer = DrawOuter(spec, track, stream);
      // Render from what the WAV will hold so the pair stays consistent.
      for (double& x : outer) x = static_cast<float>(x);
      const auto inear =
          RenderInEar(outer, track, truth.filters[a], spec.frame_length);

      Utterance utt;
      utt.talker_id = talker;
      utt.utterance_id = UtteranceId(u);
      utt.split = u < num_identify ? Split::kIdentify : Split::kEvaluate;
      utt.outer_path = out_dir / "audio" / talker / (utt.utterance_id + "_outer.wav");
      utt.inear_path = out_dir / "audio" / talker / (utt.utterance_id + "_inear.wav");
      utt.label_path = out_dir / "labels" / talker / (utt.utterance_id + ".lab");
      WriteWav(utt.outer_path, outer, spec.sample_rate);
      WriteWav(utt.inear_path, inear, spec.sample_rate);
      std::ofstream lab(utt.label_path);
      if (!lab) Fail(ErrorCategory::kIo, "cannot write " + utt.label_path.string());
      WriteLabelTrack(lab, track, inventory);
      manifest.entries.push_back(std::move(utt));
    }
  }
  SaveManifest(out_dir / "manifest.json", manifest);

  fs::create_directories(out_dir / "ground_truth");
  nlohmann::json taps_doc;
  taps_doc["seed"] = spec.seed;
  taps_doc["excitation"] = ExcitationName(spec.excitation);
  taps_doc["perturbation_scale"] = spec.perturbation_scale;
  for (std::size_t a = 0; a < truth.talkers.size(); ++a) {
    SpeechDependentModel sd;
    sd.num_phonemes = spec.num_phonemes;
    sd.num_bins = frame.num_bins();
    sd.valid.assign(spec.num_phonemes, true);
    sd.fallback.rtf.assign(sd.num_bins, Complex{});
    for (const auto& taps : truth.filters[a]) {
      const auto response = FrequencyResponse(taps, frame);
      sd.rtf_table.insert(sd.rtf_table.end(), response.begin(), response.end());
      for (std::size_t k = 0; k < sd.num_bins; ++k) {
        sd.fallback.rtf[k] += response[k] / static_cast<double>(spec.num_phonemes);
      }
    }
    TransferModel model{frame, sd, {{"scope", "ground-truth"},
                                    {"talker", truth.talkers[a]},
                                    {"fallback", "unweighted-phoneme-mean"}}};
    SaveModel(out_dir / "ground_truth" / (truth.talkers[a] + ".model"), model);
    taps_doc["talkers"][truth.talkers[a]] = truth.filters[a];
  }
  std::ofstream taps_out(out_dir / "ground_truth.json");
  taps_out << taps_doc.dump(2) << '\n';
  return truth;
}

}  // namespace ownvoice
