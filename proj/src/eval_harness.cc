// src/eval_harness.cc

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

#include "ownvoice/eval_harness.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "ownvoice/error.h"
#include "ownvoice/model_io.h"
#include "ownvoice/phoneme_labels.h"
#include "ownvoice/wav_io.h"

namespace ownvoice {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::string_view kPlanFile = "plan.json";
constexpr std::string_view kReportFormat = "ownvoice-report";

// Runs fn(0) .. fn(count - 1) on up to `jobs` threads. Exceptions are
// rethrown after all workers finish, lowest index first.
template <typename Fn>
void ParallelFor(std::size_t count, int jobs, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

std::vector<double> ReadMono(const fs::path& path, int sample_rate) {
  WavData wav = ReadWav(path);
  if (wav.sample_rate != sample_rate) {
    Fail(ErrorCategory::kFormat, path.string() + ": sample rate " +
                                     std::to_string(wav.sample_rate) +
                                     " differs from manifest rate " +
                                     std::to_string(sample_rate));
  }
  return std::move(wav.samples);
}

struct Recording {
  std::vector<double> outer;
  std::vector<double> inear;
};

Recording ReadRecording(const Utterance& utt, int sample_rate) {
  Recording rec{ReadMono(utt.outer_path, sample_rate),
                ReadMono(utt.inear_path, sample_rate)};
  if (rec.outer.size() != rec.inear.size()) {
    Fail(ErrorCategory::kFormat, utt.talker_id + "/" + utt.utterance_id +
                                     ": outer and in-ear lengths differ");
  }
  return rec;
}

FrameLabels ReadFrameLabels(const Utterance& utt,
                            const PhonemeInventory& inventory,
                            const FrameParams& frame, std::size_t num_samples) {
  const LabelTrack track = LoadLabelTrack(utt.label_path, inventory, num_samples);
  return ToFrameLabels(track, frame, NumFrames(num_samples, frame));
}

std::vector<const Utterance*> RequireIdentifySplit(const Manifest& manifest,
                                                   std::string_view talker) {
  auto utts = manifest.Select(talker, Split::kIdentify);
  if (utts.empty()) {
    Fail(ErrorCategory::kProtocol, "talker " + std::string(talker) +
                                       " has no identify-split utterances");
  }
  return utts;
}

void RequireTalker(const Manifest& manifest, const std::string& talker) {
  const auto all = manifest.talkers();
  if (std::find(all.begin(), all.end(), talker) == all.end()) {
    Fail(ErrorCategory::kInvalidArgument,
         "talker " + talker + " is not in the manifest");
  }
}

TransferModel LoadModelFor(const fs::path& model_dir, ModelKind kind,
                           const std::string& talker, int sample_rate) {
  const fs::path path = ModelPath(model_dir, kind, talker);
  if (!fs::is_regular_file(path)) {
    Fail(ErrorCategory::kIo, "missing " + std::string(ModelKindName(kind)) +
                                 " model for talker " + talker + " (" +
                                 path.string() + ")");
  }
  TransferModel model = LoadModel(path);
  if (model.frame.sample_rate != sample_rate) {
    Fail(ErrorCategory::kFormat,
         path.string() + ": model sample rate differs from the manifest");
  }
  const bool want_adaptive = kind == ModelKind::kAdaptive;
  const bool want_sd =
      kind == ModelKind::kSdIndividual || kind == ModelKind::kSdAveraged;
  const TransferKind expected = want_adaptive ? TransferKind::kAdaptive
                                : want_sd     ? TransferKind::kSpeechDependent
                                              : TransferKind::kSpeechIndependent;
  if (model.kind() != expected) {
    Fail(ErrorCategory::kFormat, path.string() + " holds a " +
                                     std::string(TransferKindName(model.kind())) +
                                     " model");
  }
  return model;
}

// Identification signals for the adaptive model, length-matched to
// `target_length`: identify-split utterance `ordinal` (cyclic) of talker a,
// cut or extended with a's following identify utterances in manifest order.
Recording AdaptiveIdentificationInput(const Manifest& manifest,
                                      const std::string& talker,
                                      std::size_t ordinal,
                                      std::size_t target_length) {
  const auto pool = RequireIdentifySplit(manifest, talker);
  const std::size_t first = ordinal % pool.size();
  Recording primary = ReadRecording(*pool[first], manifest.sample_rate);
  std::vector<std::vector<double>> outer_fill;
  std::vector<std::vector<double>> inear_fill;
  std::size_t have = primary.outer.size();
  for (std::size_t i = 1; have < target_length; ++i) {
    // With a single identify utterance the talker's only signal repeats.
    const std::size_t index = pool.size() == 1 ? first : (first + i) % pool.size();
    if (pool.size() > 1 && index == first) continue;
    Recording filler = ReadRecording(*pool[index], manifest.sample_rate);
    have += filler.outer.size();
    outer_fill.push_back(std::move(filler.outer));
    inear_fill.push_back(std::move(filler.inear));
  }
  return {MatchLength(primary.outer, target_length, outer_fill),
          MatchLength(primary.inear, target_length, inear_fill)};
}

std::string Quote(const std::string& s) { return "'" + s + "'"; }

json SummaryJson(const Summary& s) {
  return {{"count", s.count}, {"mean", s.mean}, {"median", s.median},
          {"q1", s.q1},       {"q3", s.q3},     {"min", s.min},
          {"max", s.max}};
}

template <typename T, typename Parse>
T ParseOrFail(const json& node, const char* key, Parse parse,
              const std::string& where) {
  if (!node.contains(key) || !node[key].is_string()) {
    Fail(ErrorCategory::kFormat, where + ": missing field " + key);
  }
  const auto value = parse(node[key].get<std::string>());
  if (!value) {
    Fail(ErrorCategory::kFormat,
         where + ": bad value " + Quote(node[key].get<std::string>()));
  }
  return *value;
}

}  // namespace

std::string_view ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kSiIndividual: return "si-individual";
    case ModelKind::kSdIndividual: return "sd-individual";
    case ModelKind::kSiAveraged: return "si-averaged";
    case ModelKind::kSdAveraged: return "sd-averaged";
    case ModelKind::kAdaptive: return "adaptive";
  }
  return "unknown";
}

std::optional<ModelKind> ParseModelKind(std::string_view name) {
  for (ModelKind kind : kAllModelKinds) {
    if (ModelKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

bool IsAveraged(ModelKind kind) {
  return kind == ModelKind::kSiAveraged || kind == ModelKind::kSdAveraged;
}

std::string_view ConditionName(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::kMatched: return "matched";
    case ConditionKind::kUtteranceMismatch: return "utterance-mismatch";
    case ConditionKind::kTalkerMismatch: return "talker-mismatch";
  }
  return "unknown";
}

std::optional<ConditionKind> ParseCondition(std::string_view name) {
  for (auto kind : {ConditionKind::kMatched, ConditionKind::kUtteranceMismatch,
                    ConditionKind::kTalkerMismatch}) {
    if (ConditionName(kind) == name) return kind;
  }
  return std::nullopt;
}

EvalCondition EvalCondition::AllKinds(ConditionKind kind, std::uint64_t seed) {
  EvalCondition condition{kind, {}, seed};
  for (ModelKind model : kAllModelKinds) {
    if (IsAveraged(model) && kind != ConditionKind::kTalkerMismatch) continue;
    condition.model_kinds.push_back(model);
  }
  return condition;
}

void EvalCondition::Validate() const {
  if (model_kinds.empty()) {
    Fail(ErrorCategory::kProtocol, "no model kinds requested");
  }
  for (ModelKind model : model_kinds) {
    if (IsAveraged(model) && kind != ConditionKind::kTalkerMismatch) {
      Fail(ErrorCategory::kProtocol,
           std::string(ModelKindName(model)) +
               " models are only evaluated under talker mismatch");
    }
  }
  auto sorted = model_kinds;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    Fail(ErrorCategory::kProtocol, "duplicate model kind requested");
  }
}

FrameParams HarnessConfig::Frame(int sample_rate) const {
  return FrameParams::ForFrameLength(frame_length, sample_rate);
}

MelConfig HarnessConfig::Mel(int sample_rate) const {
  return mel ? *mel : MelConfig::ForSampleRate(sample_rate);
}

fs::path ModelPath(const fs::path& model_dir, ModelKind kind,
                   std::string_view talker) {
  return model_dir / std::string(ModelKindName(kind)) /
         (std::string(talker) + ".model");
}

RtfAccumulator AccumulateTalker(const Manifest& manifest,
                                std::string_view talker,
                                const HarnessConfig& config) {
  const auto utts = RequireIdentifySplit(manifest, talker);
  const PhonemeInventory inventory =
      PhonemeInventory::Load(manifest.inventory_path);
  const FrameParams frame = config.Frame(manifest.sample_rate);

  std::vector<RtfAccumulator> parts(
      utts.size(), RtfAccumulator(inventory.size(), frame.num_bins()));
  ParallelFor(utts.size(), config.jobs, [&](std::size_t i) {
    const Recording rec = ReadRecording(*utts[i], manifest.sample_rate);
    const FrameLabels labels =
        ReadFrameLabels(*utts[i], inventory, frame, rec.outer.size());
    parts[i].Accumulate(Analyze(rec.outer, frame), Analyze(rec.inear, frame),
                        labels);
  });
  RtfAccumulator total(inventory.size(), frame.num_bins());
  for (const auto& part : parts) total.Merge(part);
  return total;
}

std::vector<fs::path> IdentifyModels(const Manifest& manifest,
                                     const std::vector<ModelKind>& kinds,
                                     const HarnessConfig& config,
                                     const fs::path& model_dir,
                                     const std::vector<std::string>& talkers) {
  if (kinds.empty()) Fail(ErrorCategory::kProtocol, "no model kinds requested");
  config.nlms.Validate();
  const FrameParams frame = config.Frame(manifest.sample_rate);
  const auto all_talkers = manifest.talkers();
  const auto targets = talkers.empty() ? all_talkers : talkers;
  for (const auto& t : targets) RequireTalker(manifest, t);

  const bool wants_averaged =
      std::any_of(kinds.begin(), kinds.end(), IsAveraged);
  const bool wants_rtf = std::any_of(kinds.begin(), kinds.end(),
                                     [](ModelKind k) { return k != ModelKind::kAdaptive; });
  if (wants_averaged && all_talkers.size() < 2) {
    Fail(ErrorCategory::kProtocol,
         "leave-one-out averaging needs at least two talkers");
  }

  // Averaged models need every talker's sums, individual ones only the
  // targets'.
  std::map<std::string, RtfAccumulator> accumulators;
  if (wants_rtf) {
    for (const auto& talker : wants_averaged ? all_talkers : targets) {
      accumulators.emplace(talker, AccumulateTalker(manifest, talker, config));
    }
  }

  std::vector<fs::path> written;
  for (ModelKind kind : kinds) {
    fs::create_directories(model_dir / std::string(ModelKindName(kind)));
    for (const auto& talker : targets) {
      TransferModel model;
      model.frame = frame;
      model.metadata["created_by"] = std::string(kToolVersion);
      model.metadata["model_kind"] = std::string(ModelKindName(kind));

      std::optional<RtfAccumulator> acc;
      if (IsAveraged(kind)) {
        model.metadata["scope"] = "leave-one-out";
        model.metadata["held_out_talker"] = talker;
        std::string sources;
        for (const auto& other : all_talkers) {
          if (other == talker) continue;
          acc = acc ? Merge(std::move(*acc), accumulators.at(other))
                    : accumulators.at(other);
          sources += (sources.empty() ? "" : ",") + other;
        }
        model.metadata["source_talkers"] = sources;
      } else {
        model.metadata["scope"] = "individual";
        model.metadata["talker"] = talker;
        if (kind == ModelKind::kAdaptive) {
          RequireIdentifySplit(manifest, talker);
        } else {
          acc = accumulators.at(talker);
        }
      }

      switch (kind) {
        case ModelKind::kSiIndividual:
        case ModelKind::kSiAveraged:
          model.body = FinalizeSpeechIndependent(*acc);
          break;
        case ModelKind::kSdIndividual:
        case ModelKind::kSdAveraged:
          model.body = FinalizeSpeechDependent(
              *acc, config.fallback_min_frames, config.smoothing_alpha);
          model.metadata["fallback_min_frames"] =
              std::to_string(config.fallback_min_frames);
          break;
        case ModelKind::kAdaptive:
          model.body = config.nlms;
          break;
      }
      if (acc) {
        model.metadata["frames"] =
            std::to_string(acc->frame_count(acc->pooled_row()));
      }
      const fs::path path = ModelPath(model_dir, kind, talker);
      SaveModel(path, model);
      written.push_back(path);
    }
  }
  return written;
}

std::vector<std::string> AssignMismatchTalkers(const Manifest& manifest,
                                               std::uint64_t seed) {
  const auto talkers = manifest.talkers();
  if (talkers.size() < 2) {
    Fail(ErrorCategory::kProtocol, "talker mismatch needs at least two talkers");
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), 0x7A1Bu};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<std::size_t> pick(0, talkers.size() - 2);
  std::vector<std::string> assigned;
  for (const auto& utt : manifest.entries) {
    if (utt.split != Split::kEvaluate) continue;
    const std::size_t self =
        std::find(talkers.begin(), talkers.end(), utt.talker_id) - talkers.begin();
    std::size_t draw = pick(rng);
    if (draw >= self) ++draw;  // skip talker b
    assigned.push_back(talkers[draw]);
  }
  return assigned;
}

SimulationPlan SimulateCondition(const Manifest& manifest,
                                 const fs::path& model_dir,
                                 const EvalCondition& condition,
                                 const HarnessConfig& config,
                                 const fs::path& sim_dir) {
  condition.Validate();
  const Split split = condition.kind == ConditionKind::kMatched
                          ? Split::kIdentify
                          : Split::kEvaluate;
  const PhonemeInventory inventory =
      PhonemeInventory::Load(manifest.inventory_path);
  const auto talkers = manifest.talkers();

  std::vector<std::string> assignment;
  if (condition.kind == ConditionKind::kTalkerMismatch) {
    assignment = AssignMismatchTalkers(manifest, condition.seed);
  }

  // One unit per simulated utterance of talker b.
  struct Unit {
    const Utterance* utt;
    std::string source;      // talker a for individual models
    std::size_t ordinal;     // position among b's utterances in this split
  };
  std::vector<Unit> units;
  {
    std::map<std::string, std::size_t> ordinals;
    std::size_t evaluate_index = 0;
    for (const auto& utt : manifest.entries) {
      if (utt.split != split) continue;
      std::string source = utt.talker_id;
      if (condition.kind == ConditionKind::kTalkerMismatch) {
        source = assignment[evaluate_index];
      }
      if (split == Split::kEvaluate) ++evaluate_index;
      units.push_back({&utt, source, ordinals[utt.talker_id]++});
    }
  }
  if (units.empty()) {
    Fail(ErrorCategory::kProtocol,
         "manifest has no " + std::string(SplitName(split)) +
             "-split utterances for " +
             std::string(ConditionName(condition.kind)));
  }

  // Load each needed model once.
  std::map<std::pair<ModelKind, std::string>, TransferModel> models;
  for (const auto& unit : units) {
    for (ModelKind kind : condition.model_kinds) {
      const std::string owner =
          IsAveraged(kind) ? unit.utt->talker_id : unit.source;
      const auto key = std::make_pair(kind, owner);
      if (!models.contains(key)) {
        models.emplace(key, LoadModelFor(model_dir, kind, owner,
                                         manifest.sample_rate));
      }
    }
  }

  const fs::path condition_dir = sim_dir / std::string(ConditionName(condition.kind));
  SimulationPlan plan;
  plan.condition = condition.kind;
  plan.seed = condition.seed;
  plan.model_kinds = condition.model_kinds;
  for (const auto& unit : units) {
    for (ModelKind kind : condition.model_kinds) {
      SimulationEntry entry;
      entry.talker = unit.utt->talker_id;
      entry.utterance = unit.utt->utterance_id;
      entry.kind = kind;
      entry.source_talker = IsAveraged(kind) ? "" : unit.source;
      entry.file = (fs::path(std::string(ModelKindName(kind))) / entry.talker /
                    (entry.utterance + ".wav"))
                       .generic_string();
      fs::create_directories((condition_dir / entry.file).parent_path());
      plan.entries.push_back(std::move(entry));
    }
  }

  const std::size_t kinds_per_unit = condition.model_kinds.size();
  ParallelFor(units.size(), config.jobs, [&](std::size_t u) {
    const Unit& unit = units[u];
    const Recording rec = ReadRecording(*unit.utt, manifest.sample_rate);
    std::optional<LabelTrack> track;
    for (std::size_t j = 0; j < kinds_per_unit; ++j) {
      const SimulationEntry& entry = plan.entries[u * kinds_per_unit + j];
      const std::string owner =
          IsAveraged(entry.kind) ? entry.talker : entry.source_talker;
      const TransferModel& model = models.at({entry.kind, owner});
      std::vector<double> simulated;
      if (const auto* si = std::get_if<SpeechIndependentModel>(&model.body)) {
        simulated = SimulateSpeechIndependent(*si, rec.outer, model.frame);
      } else if (const auto* sd =
                     std::get_if<SpeechDependentModel>(&model.body)) {
        if (sd->num_phonemes != inventory.size()) {
          Fail(ErrorCategory::kShapeMismatch,
               "model inventory size differs from the manifest inventory");
        }
        if (!track) {
          track = LoadLabelTrack(unit.utt->label_path, inventory, rec.outer.size());
        }
        const FrameLabels labels = ToFrameLabels(
            *track, model.frame, NumFrames(rec.outer.size(), model.frame));
        simulated = SimulateSpeechDependent(*sd, rec.outer, labels, model.frame);
      } else {
        const auto& nlms = std::get<NlmsConfig>(model.body);
        if (condition.kind == ConditionKind::kMatched) {
          simulated = NlmsIdentifyAndSimulate(rec.outer, rec.inear, rec.outer,
                                              nlms)
                          .simulated;
        } else {
          const Recording id = AdaptiveIdentificationInput(
              manifest, entry.source_talker, unit.ordinal, rec.outer.size());
          simulated =
              NlmsIdentifyAndSimulate(id.outer, id.inear, rec.outer, nlms)
                  .simulated;
        }
      }
      WriteWav(condition_dir / entry.file, simulated, manifest.sample_rate,
               WavEncoding::kFloat32);
    }
  });

  json doc;
  doc["condition"] = ConditionName(plan.condition);
  doc["seed"] = plan.seed;
  doc["model_kinds"] = json::array();
  for (ModelKind kind : plan.model_kinds) {
    doc["model_kinds"].push_back(ModelKindName(kind));
  }
  doc["entries"] = json::array();
  for (const auto& entry : plan.entries) {
    doc["entries"].push_back({{"talker", entry.talker},
                              {"utterance", entry.utterance},
                              {"kind", ModelKindName(entry.kind)},
                              {"source_talker", entry.source_talker},
                              {"file", entry.file}});
  }
  std::ofstream out(condition_dir / std::string(kPlanFile));
  if (!out) Fail(ErrorCategory::kIo, "cannot write simulation plan");
  out << doc.dump(2) << '\n';
  return plan;
}

SimulationPlan LoadPlan(const fs::path& condition_dir) {
  const fs::path path = condition_dir / std::string(kPlanFile);
  std::ifstream in(path);
  if (!in) Fail(ErrorCategory::kIo, "missing simulation plan " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    Fail(ErrorCategory::kFormat, path.string() + ": " + e.what());
  }
  const std::string where = path.string();
  SimulationPlan plan;
  plan.condition =
      ParseOrFail<ConditionKind>(doc, "condition", ParseCondition, where);
  plan.seed = doc.value("seed", std::uint64_t{0});
  for (const auto& name : doc.value("model_kinds", json::array())) {
    const auto kind = ParseModelKind(name.get<std::string>());
    if (!kind) Fail(ErrorCategory::kFormat, where + ": bad model kind");
    plan.model_kinds.push_back(*kind);
  }
  for (const auto& node : doc.value("entries", json::array())) {
    SimulationEntry entry;
    entry.talker = node.at("talker").get<std::string>();
    entry.utterance = node.at("utterance").get<std::string>();
    entry.kind = ParseOrFail<ModelKind>(node, "kind", ParseModelKind, where);
    entry.source_talker = node.at("source_talker").get<std::string>();
    entry.file = node.at("file").get<std::string>();
    plan.entries.push_back(std::move(entry));
  }
  return plan;
}

const Aggregate* EvalReport::Find(ConditionKind condition,
                                  ModelKind kind) const {
  for (const auto& agg : aggregates) {
    if (agg.condition == condition && agg.kind == kind) return &agg;
  }
  return nullptr;
}

Summary Summarize(std::vector<double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  s.median = quantile(0.5);
  s.q1 = quantile(0.25);
  s.q3 = quantile(0.75);
  s.min = values.front();
  s.max = values.back();
  return s;
}

std::vector<Aggregate> AggregateRows(const std::vector<EvalRow>& rows) {
  std::vector<std::pair<ConditionKind, ModelKind>> order;
  std::map<std::pair<ConditionKind, ModelKind>,
           std::pair<std::vector<double>, std::vector<double>>>
      groups;
  for (const auto& row : rows) {
    const auto key = std::make_pair(row.condition, row.kind);
    if (!groups.contains(key)) order.push_back(key);
    groups[key].first.push_back(row.lsd);
    groups[key].second.push_back(row.mcd);
  }
  std::vector<Aggregate> aggregates;
  for (const auto& key : order) {
    aggregates.push_back({key.first, key.second, Summarize(groups[key].first),
                          Summarize(groups[key].second)});
  }
  return aggregates;
}

EvalReport EvaluateCondition(const Manifest& manifest, const fs::path& sim_dir,
                             ConditionKind condition,
                             const HarnessConfig& config) {
  const fs::path condition_dir = sim_dir / std::string(ConditionName(condition));
  const SimulationPlan plan = LoadPlan(condition_dir);
  if (plan.condition != condition) {
    Fail(ErrorCategory::kFormat, "simulation plan is for condition " +
                                     std::string(ConditionName(plan.condition)));
  }

  // Every utterance of the condition's split must have been simulated for
  // every planned kind.
  const Split split =
      condition == ConditionKind::kMatched ? Split::kIdentify : Split::kEvaluate;
  std::map<std::pair<std::string, std::string>, const Utterance*> by_key;
  for (const auto& utt : manifest.entries) {
    by_key[{utt.talker_id, utt.utterance_id}] = &utt;
  }
  std::set<std::tuple<std::string, std::string, ModelKind>> planned;
  for (const auto& entry : plan.entries) {
    if (!by_key.contains({entry.talker, entry.utterance})) {
      Fail(ErrorCategory::kFormat, "plan entry " + entry.talker + "/" +
                                       entry.utterance + " is not in the manifest");
    }
    planned.emplace(entry.talker, entry.utterance, entry.kind);
  }
  for (const auto& utt : manifest.entries) {
    if (utt.split != split) continue;
    for (ModelKind kind : plan.model_kinds) {
      if (!planned.contains({utt.talker_id, utt.utterance_id, kind})) {
        Fail(ErrorCategory::kIo, "no simulated " +
                                     std::string(ModelKindName(kind)) +
                                     " signal for " + utt.talker_id + "/" +
                                     utt.utterance_id);
      }
    }
  }

  const FrameParams frame = config.Frame(manifest.sample_rate);
  const MelConfig mel = config.Mel(manifest.sample_rate);
  EvalReport report;
  report.rows.resize(plan.entries.size());
  ParallelFor(plan.entries.size(), config.jobs, [&](std::size_t i) {
    const SimulationEntry& entry = plan.entries[i];
    const Utterance& utt = *by_key.at({entry.talker, entry.utterance});
    const fs::path sim_path = condition_dir / entry.file;
    if (!fs::is_regular_file(sim_path)) {
      Fail(ErrorCategory::kIo, "missing simulated file " + sim_path.string());
    }
    const auto recorded = ReadMono(utt.inear_path, manifest.sample_rate);
    const auto simulated = ReadMono(sim_path, manifest.sample_rate);
    if (simulated.size() != recorded.size()) {
      Fail(ErrorCategory::kShapeMismatch,
           sim_path.string() + " has " + std::to_string(simulated.size()) +
               " samples, recording has " + std::to_string(recorded.size()));
    }
    EvalRow& row = report.rows[i];
    row.condition = condition;
    row.kind = entry.kind;
    row.talker = entry.talker;
    row.utterance = entry.utterance;
    row.source_talker = entry.source_talker;
    row.lsd = LogSpectralDistance(recorded, simulated, frame, config.lsd_floor);
    row.mcd = MelCepstralDistance(recorded, simulated, frame, mel);
  });
  report.aggregates = AggregateRows(report.rows);
  return report;
}

EvalReport CombineReports(const std::vector<EvalReport>& reports) {
  EvalReport combined;
  for (const auto& report : reports) {
    combined.rows.insert(combined.rows.end(), report.rows.begin(),
                         report.rows.end());
  }
  combined.aggregates = AggregateRows(combined.rows);
  return combined;
}

void SaveReport(const fs::path& path, const EvalReport& report) {
  json doc;
  doc["format"] = kReportFormat;
  doc["version"] = 1;
  doc["rows"] = json::array();
  for (const auto& row : report.rows) {
    doc["rows"].push_back({{"condition", ConditionName(row.condition)},
                           {"kind", ModelKindName(row.kind)},
                           {"talker", row.talker},
                           {"utterance", row.utterance},
                           {"source_talker", row.source_talker},
                           {"lsd", row.lsd},
                           {"mcd", row.mcd}});
  }
  doc["aggregates"] = json::array();
  for (const auto& agg : report.aggregates) {
    doc["aggregates"].push_back({{"condition", ConditionName(agg.condition)},
                                 {"kind", ModelKindName(agg.kind)},
                                 {"lsd", SummaryJson(agg.lsd)},
                                 {"mcd", SummaryJson(agg.mcd)}});
  }
  std::ofstream out(path);
  if (!out) Fail(ErrorCategory::kIo, "cannot write report " + path.string());
  out << doc.dump(2) << '\n';
}

EvalReport LoadReport(const fs::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCategory::kIo, "cannot open report " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    Fail(ErrorCategory::kFormat, path.string() + ": " + e.what());
  }
  const std::string where = path.string();
  if (!doc.is_object() || doc.value("format", "") != kReportFormat) {
    Fail(ErrorCategory::kFormat, where + ": not an ownvoice report");
  }
  EvalReport report;
  for (const auto& node : doc.value("rows", json::array())) {
    EvalRow row;
    row.condition =
        ParseOrFail<ConditionKind>(node, "condition", ParseCondition, where);
    row.kind = ParseOrFail<ModelKind>(node, "kind", ParseModelKind, where);
    row.talker = node.at("talker").get<std::string>();
    row.utterance = node.at("utterance").get<std::string>();
    row.source_talker = node.value("source_talker", "");
    row.lsd = node.at("lsd").get<double>();
    row.mcd = node.at("mcd").get<double>();
    report.rows.push_back(std::move(row));
  }
  report.aggregates = AggregateRows(report.rows);
  return report;
}

void PrintReportTable(std::ostream& out, const EvalReport& report) {
  char line[256];
  std::snprintf(line, sizeof(line),
                "%-20s %-14s %5s | %8s %8s %8s %8s | %8s %8s %8s %8s\n",
                "condition", "model", "n", "LSD mean", "median", "Q1", "Q3",
                "MCD mean", "median", "Q1", "Q3");
  out << line;
  out << std::string(120, '-') << '\n';
  for (const auto& agg : report.aggregates) {
    std::snprintf(line, sizeof(line),
                  "%-20s %-14s %5zu | %8.3f %8.3f %8.3f %8.3f | %8.3f %8.3f "
                  "%8.3f %8.3f\n",
                  std::string(ConditionName(agg.condition)).c_str(),
                  std::string(ModelKindName(agg.kind)).c_str(), agg.lsd.count,
                  agg.lsd.mean, agg.lsd.median, agg.lsd.q1, agg.lsd.q3,
                  agg.mcd.mean, agg.mcd.median, agg.mcd.q1, agg.mcd.q3);
    out << line;
  }
}

void WriteReportCsv(std::ostream& out, const EvalReport& report) {
  out << "condition,kind,talker,utterance,source_talker,lsd,mcd\n";
  char num[64];
  for (const auto& row : report.rows) {
    out << ConditionName(row.condition) << ',' << ModelKindName(row.kind)
        << ',' << row.talker << ',' << row.utterance << ','
        << row.source_talker;
    std::snprintf(num, sizeof(num), ",%.17g,%.17g\n", row.lsd, row.mcd);
    out << num;
  }
}

}  // namespace ownvoice
