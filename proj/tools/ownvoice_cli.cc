// tools/ownvoice_cli.cc

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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ownvoice/error.h"
#include "ownvoice/eval_harness.h"
#include "ownvoice/manifest.h"
#include "ownvoice/synth_oracle.h"

namespace ownvoice {
namespace {

namespace fs = std::filesystem;

constexpr int kExitUsage = 2;

int ExitCode(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kInvalidArgument: return 3;
    case ErrorCategory::kShapeMismatch: return 4;
    case ErrorCategory::kFormat: return 5;
    case ErrorCategory::kChecksum: return 6;
    case ErrorCategory::kIo: return 7;
    case ErrorCategory::kProtocol: return 8;
  }
  return 1;
}

struct Options {
  fs::path manifest;
  fs::path models = "models";
  fs::path sim = "sim";
  fs::path out;
  fs::path report = "report.json";
  fs::path csv;
  std::vector<std::string> kinds{"all"};
  std::vector<std::string> conditions{"all"};
  std::vector<std::string> talkers;
  std::uint64_t seed = 1;
  HarnessConfig harness;
  SynthSpec synth;
  std::string excitation = "white-noise";
};

std::vector<ConditionKind> Conditions(const std::vector<std::string>& names) {
  std::vector<ConditionKind> out;
  for (const auto& name : names) {
    if (name == "all") {
      return {ConditionKind::kMatched, ConditionKind::kUtteranceMismatch,
              ConditionKind::kTalkerMismatch};
    }
    const auto kind = ParseCondition(name);
    if (!kind) Fail(ErrorCategory::kInvalidArgument, "unknown condition " + name);
    out.push_back(*kind);
  }
  return out;
}

// "all" expands to every kind the condition admits (or every kind when no
// condition is given).
std::vector<ModelKind> Kinds(const std::vector<std::string>& names,
                             std::optional<ConditionKind> condition) {
  std::vector<ModelKind> out;
  for (const auto& name : names) {
    if (name == "all") {
      if (condition) return EvalCondition::AllKinds(*condition, 0).model_kinds;
      return {std::begin(kAllModelKinds), std::end(kAllModelKinds)};
    }
    const auto kind = ParseModelKind(name);
    if (!kind) Fail(ErrorCategory::kInvalidArgument, "unknown model kind " + name);
    out.push_back(*kind);
  }
  return out;
}

void WriteCsv(const fs::path& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) Fail(ErrorCategory::kIo, "cannot write " + path.string());
  WriteReportCsv(out, report);
}

void RunIdentify(const Options& opt) {
  const Manifest manifest = LoadManifest(opt.manifest);
  const auto paths = IdentifyModels(manifest, Kinds(opt.kinds, std::nullopt),
                                    opt.harness, opt.models, opt.talkers);
  for (const auto& path : paths) std::cout << path.string() << '\n';
}

void RunSimulate(const Options& opt) {
  const Manifest manifest = LoadManifest(opt.manifest);
  for (ConditionKind kind : Conditions(opt.conditions)) {
    EvalCondition condition{kind, Kinds(opt.kinds, kind), opt.seed};
    const SimulationPlan plan =
        SimulateCondition(manifest, opt.models, condition, opt.harness, opt.sim);
    std::cout << ConditionName(kind) << ": " << plan.entries.size()
              << " simulated signals\n";
  }
}

void RunEvaluate(const Options& opt) {
  const Manifest manifest = LoadManifest(opt.manifest);
  std::vector<EvalReport> reports;
  for (ConditionKind kind : Conditions(opt.conditions)) {
    reports.push_back(EvaluateCondition(manifest, opt.sim, kind, opt.harness));
  }
  const EvalReport report = CombineReports(reports);
  SaveReport(opt.report, report);
  if (!opt.csv.empty()) WriteCsv(opt.csv, report);
  PrintReportTable(std::cout, report);
}

void RunSynth(Options opt) {
  const auto excitation = ParseExcitation(opt.excitation);
  if (!excitation) {
    Fail(ErrorCategory::kInvalidArgument, "unknown excitation " + opt.excitation);
  }
  opt.synth.excitation = *excitation;
  const GroundTruth truth = GenerateCorpus(opt.synth, opt.out);
  std::cout << (opt.out / "manifest.json").string() << ": "
            << truth.talkers.size() << " talkers\n";
}

void RunReport(const Options& opt) {
  const EvalReport report = LoadReport(opt.report);
  if (!opt.csv.empty()) WriteCsv(opt.csv, report);
  PrintReportTable(std::cout, report);
}

void AddModelFlags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--alpha", opt.harness.smoothing_alpha,
                  "RTF smoothing factor in [0, 1)")
      ->capture_default_str();
  cmd->add_option("--min-frames", opt.harness.fallback_min_frames,
                  "frames a phoneme needs before it gets its own RTF")
      ->capture_default_str();
  cmd->add_option("--taps", opt.harness.nlms.filter_length, "NLMS filter length")
      ->capture_default_str();
  cmd->add_option("--mu", opt.harness.nlms.step_size, "NLMS step size")
      ->capture_default_str();
  cmd->add_option("--epsilon", opt.harness.nlms.regularization,
                  "NLMS regularization")
      ->capture_default_str();
}

}  // namespace
}  // namespace ownvoice

int main(int argc, char** argv) {
  using namespace ownvoice;
  Options opt;
  CLI::App app{"Own-voice transfer identification, simulation and evaluation"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  auto add_jobs = [&](CLI::App* cmd) {
    cmd->add_option("-j,--jobs", opt.harness.jobs, "worker threads")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };
  auto add_frame = [&](CLI::App* cmd) {
    cmd->add_option("-K,--frame-length", opt.harness.frame_length,
                    "STFT frame length (hop is half)")
        ->capture_default_str();
  };

  auto* identify = app.add_subcommand("identify", "estimate transfer models");
  identify->add_option("-m,--manifest", opt.manifest, "corpus manifest")->required();
  identify->add_option("-k,--kind", opt.kinds, "model kind(s) or 'all'")
      ->capture_default_str();
  identify->add_option("-t,--talker", opt.talkers, "restrict to these talkers");
  identify->add_option("-o,--models", opt.models, "model directory")
      ->capture_default_str();
  add_frame(identify);
  AddModelFlags(identify, opt);
  add_jobs(identify);

  auto* simulate = app.add_subcommand("simulate", "simulate in-ear signals");
  simulate->add_option("-m,--manifest", opt.manifest, "corpus manifest")->required();
  simulate->add_option("--models", opt.models, "model directory")
      ->capture_default_str();
  simulate->add_option("-c,--condition", opt.conditions, "condition(s) or 'all'")
      ->capture_default_str();
  simulate->add_option("-k,--kind", opt.kinds, "model kind(s) or 'all'")
      ->capture_default_str();
  simulate->add_option("-s,--seed", opt.seed, "talker assignment seed")
      ->capture_default_str();
  simulate->add_option("-o,--sim", opt.sim, "simulation directory")
      ->capture_default_str();
  add_jobs(simulate);

  auto* evaluate = app.add_subcommand("evaluate", "score simulated signals");
  evaluate->add_option("-m,--manifest", opt.manifest, "corpus manifest")->required();
  evaluate->add_option("--sim", opt.sim, "simulation directory")
      ->capture_default_str();
  evaluate->add_option("-c,--condition", opt.conditions, "condition(s) or 'all'")
      ->capture_default_str();
  evaluate->add_option("-r,--report", opt.report, "JSON report path")
      ->capture_default_str();
  evaluate->add_option("--csv", opt.csv, "per-utterance CSV path");
  add_frame(evaluate);
  add_jobs(evaluate);

  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  synth->add_option("-o,--out", opt.out, "output directory")->required();
  synth->add_option("-s,--seed", opt.synth.seed)->capture_default_str();
  synth->add_option("--talkers", opt.synth.num_talkers)->capture_default_str();
  synth->add_option("--utterances", opt.synth.utterances_per_talker)
      ->capture_default_str();
  synth->add_option("--length", opt.synth.utterance_length, "samples")
      ->capture_default_str();
  synth->add_option("--phonemes", opt.synth.num_phonemes)->capture_default_str();
  synth->add_option("--fir", opt.synth.filter_length, "planted filter taps")
      ->capture_default_str();
  synth->add_option("--excitation", opt.excitation, "white-noise, filtered-noise or pulse-train")
      ->capture_default_str();
  synth->add_option("--perturbation", opt.synth.perturbation_scale)
      ->capture_default_str();
  synth->add_option("--identify-fraction", opt.synth.identify_fraction)
      ->capture_default_str();
  synth->add_option("--sample-rate", opt.synth.sample_rate)->capture_default_str();
  synth->add_option("-K,--frame-length", opt.synth.frame_length)
      ->capture_default_str();
  synth->add_option("--max-span-frames", opt.synth.max_span_frames)
      ->capture_default_str();
  synth->add_option("--min-span-level", opt.synth.min_span_level)
      ->capture_default_str();
  synth->add_option("--silence-level", opt.synth.silence_level)
      ->capture_default_str();
  synth->add_option("--min-gain", opt.synth.min_gain)->capture_default_str();
  synth->add_option("--max-gain", opt.synth.max_gain)->capture_default_str();

  auto* report = app.add_subcommand("report", "print a saved report");
  report->add_option("-r,--report", opt.report, "JSON report path")
      ->capture_default_str();
  report->add_option("--csv", opt.csv, "per-utterance CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*identify) RunIdentify(opt);
    if (*simulate) RunSimulate(opt);
    if (*evaluate) RunEvaluate(opt);
    if (*synth) RunSynth(opt);
    if (*report) RunReport(opt);
  } catch (const Error& e) {
    std::cerr << "ownvoice: " << CategoryName(e.category()) << " error: "
              << e.what() << '\n';
    return ExitCode(e.category());
  } catch (const std::exception& e) {
    std::cerr << "ownvoice: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
