// include/ownvoice/eval_harness.h

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

#ifndef OWNVOICE_EVAL_HARNESS_H_
#define OWNVOICE_EVAL_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ownvoice/adaptive_nlms.h"
#include "ownvoice/manifest.h"
#include "ownvoice/metrics.h"
#include "ownvoice/rtf_models.h"
#include "ownvoice/stft.h"

namespace ownvoice {

inline constexpr std::string_view kToolVersion = "ownvoice 0.1.0";

enum class ModelKind {
  kSiIndividual,
  kSdIndividual,
  kSiAveraged,
  kSdAveraged,
  kAdaptive,
};

inline constexpr ModelKind kAllModelKinds[] = {
    ModelKind::kSiIndividual, ModelKind::kSdIndividual,
    ModelKind::kSiAveraged, ModelKind::kSdAveraged, ModelKind::kAdaptive};

std::string_view ModelKindName(ModelKind kind);
std::optional<ModelKind> ParseModelKind(std::string_view name);
bool IsAveraged(ModelKind kind);

enum class ConditionKind { kMatched, kUtteranceMismatch, kTalkerMismatch };

std::string_view ConditionName(ConditionKind kind);
std::optional<ConditionKind> ParseCondition(std::string_view name);

// Which models are simulated under which protocol. Averaged models exist
// only for talker mismatch; the adaptive model is never averaged.
struct EvalCondition {
  ConditionKind kind = ConditionKind::kMatched;
  std::vector<ModelKind> model_kinds;
  std::uint64_t seed = 0;  // talker assignment under talker mismatch

  // Every model kind the protocol admits for `kind`.
  static EvalCondition AllKinds(ConditionKind kind, std::uint64_t seed = 0);
  // Throws kProtocol for a kind the condition does not admit.
  void Validate() const;
};

struct HarnessConfig {
  int frame_length = 128;
  double smoothing_alpha = kDefaultSmoothingAlpha;
  int fallback_min_frames = kDefaultFallbackMinFrames;
  NlmsConfig nlms;
  double lsd_floor = kDefaultLsdFloor;
  std::optional<MelConfig> mel;  // defaults to MelConfig::ForSampleRate
  int jobs = 1;

  FrameParams Frame(int sample_rate) const;
  MelConfig Mel(int sample_rate) const;
};

// <model_dir>/<kind>/<talker>.model; for averaged kinds <talker> is the
// held-out talker.
std::filesystem::path ModelPath(const std::filesystem::path& model_dir,
                                ModelKind kind, std::string_view talker);

// Identification. Individual models use each talker's identify split;
// averaged models merge the accumulators of every other talker. `talkers`
// restricts which talkers get a model (empty: all).
std::vector<std::filesystem::path> IdentifyModels(
    const Manifest& manifest, const std::vector<ModelKind>& kinds,
    const HarnessConfig& config, const std::filesystem::path& model_dir,
    const std::vector<std::string>& talkers = {});

// Per-talker accumulator over the identify split, exposed for tests.
RtfAccumulator AccumulateTalker(const Manifest& manifest,
                                std::string_view talker,
                                const HarnessConfig& config);

struct SimulationEntry {
  std::string talker;          // talker b whose speech is simulated
  std::string utterance;
  ModelKind kind = ModelKind::kSiIndividual;
  std::string source_talker;   // talker a, empty for averaged models
  std::string file;            // relative to the condition directory
};

struct SimulationPlan {
  ConditionKind condition = ConditionKind::kMatched;
  std::uint64_t seed = 0;
  std::vector<ModelKind> model_kinds;
  std::vector<SimulationEntry> entries;
};

// Draws a talker a != b independently for every evaluate-split utterance,
// visiting entries in manifest order with a generator seeded by `seed`.
// Returns one talker id per evaluate-split entry, in that order.
std::vector<std::string> AssignMismatchTalkers(const Manifest& manifest,
                                               std::uint64_t seed);

// Writes <sim_dir>/<condition>/<kind>/<talker>/<utterance>.wav (float32)
// and <sim_dir>/<condition>/plan.json.
SimulationPlan SimulateCondition(const Manifest& manifest,
                                 const std::filesystem::path& model_dir,
                                 const EvalCondition& condition,
                                 const HarnessConfig& config,
                                 const std::filesystem::path& sim_dir);

SimulationPlan LoadPlan(const std::filesystem::path& condition_dir);

struct EvalRow {
  ConditionKind condition = ConditionKind::kMatched;
  ModelKind kind = ModelKind::kSiIndividual;
  std::string talker;
  std::string utterance;
  std::string source_talker;
  double lsd = 0.0;
  double mcd = 0.0;

  bool operator==(const EvalRow&) const = default;
};

struct Summary {
  std::size_t count = 0;
  double mean = 0.0, median = 0.0, q1 = 0.0, q3 = 0.0, min = 0.0, max = 0.0;

  bool operator==(const Summary&) const = default;
};

struct Aggregate {
  ConditionKind condition = ConditionKind::kMatched;
  ModelKind kind = ModelKind::kSiIndividual;
  Summary lsd;
  Summary mcd;

  bool operator==(const Aggregate&) const = default;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::vector<Aggregate> aggregates;

  // Aggregate for (condition, kind), if any rows exist.
  const Aggregate* Find(ConditionKind condition, ModelKind kind) const;
};

// Linear-interpolation quartiles over `values`.
Summary Summarize(std::vector<double> values);
// Aggregates per (condition, kind) in first-appearance order.
std::vector<Aggregate> AggregateRows(const std::vector<EvalRow>& rows);

// Scores every simulated file of the condition's plan against the recorded
// in-ear signal.
EvalReport EvaluateCondition(const Manifest& manifest,
                             const std::filesystem::path& sim_dir,
                             ConditionKind condition,
                             const HarnessConfig& config);

// Concatenates rows and recomputes aggregates.
EvalReport CombineReports(const std::vector<EvalReport>& reports);

void SaveReport(const std::filesystem::path& path, const EvalReport& report);
EvalReport LoadReport(const std::filesystem::path& path);
void PrintReportTable(std::ostream& out, const EvalReport& report);
void WriteReportCsv(std::ostream& out, const EvalReport& report);

}  // namespace ownvoice

#endif  // OWNVOICE_EVAL_HARNESS_H_
