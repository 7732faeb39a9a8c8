// src/manifest.cc

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

#include "ownvoice/manifest.h"

#include <fstream>
#include <set>
#include <utility>

#include "json.hpp"
#include "ownvoice/error.h"
#include "ownvoice/wav_io.h"

namespace ownvoice {
namespace {

using nlohmann::json;

constexpr std::string_view kManifestFormat = "ownvoice-manifest";
constexpr int kManifestVersion = 1;

std::string RequireString(const json& node, const char* key,
                          const std::string& where) {
  if (!node.contains(key) || !node[key].is_string()) {
    Fail(ErrorCategory::kFormat, where + ": missing string field '" + key + "'");
  }
  return node[key].get<std::string>();
}

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& rel) {
  std::filesystem::path p(rel);
  return p.is_absolute() ? p : base / p;
}

void RequireFile(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) {
    Fail(ErrorCategory::kIo, "missing file " + path.string());
  }
}

std::string Relativize(const std::filesystem::path& base,
                       const std::filesystem::path& path) {
  const auto rel = path.lexically_relative(base);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return path.generic_string();
}

}  // namespace

std::string_view SplitName(Split split) {
  return split == Split::kIdentify ? "identify" : "evaluate";
}

std::optional<Split> ParseSplit(std::string_view name) {
  if (name == "identify") return Split::kIdentify;
  if (name == "evaluate") return Split::kEvaluate;
  return std::nullopt;
}

std::vector<std::string> Manifest::talkers() const {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const auto& entry : entries) {
    if (seen.insert(entry.talker_id).second) ids.push_back(entry.talker_id);
  }
  return ids;
}

std::vector<const Utterance*> Manifest::Select(std::string_view talker,
                                               Split split) const {
  std::vector<const Utterance*> out;
  for (const auto& entry : entries) {
    if (entry.talker_id == talker && entry.split == split) {
      out.push_back(&entry);
    }
  }
  return out;
}

Manifest LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCategory::kIo, "cannot open manifest " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    Fail(ErrorCategory::kFormat,
         "manifest " + path.string() + " is not valid JSON: " + e.what());
  }
  const std::string where = "manifest " + path.string();
  if (!doc.is_object() || doc.value("format", "") != kManifestFormat) {
    Fail(ErrorCategory::kFormat, where + ": not an ownvoice manifest");
  }
  if (doc.value("version", 0) != kManifestVersion) {
    Fail(ErrorCategory::kFormat, where + ": unsupported manifest version");
  }
  if (!doc.contains("sample_rate") || !doc["sample_rate"].is_number_integer() ||
      doc["sample_rate"].get<int>() <= 0) {
    Fail(ErrorCategory::kFormat, where + ": sample_rate must be a positive integer");
  }

  const auto base = path.parent_path();
  Manifest manifest;
  manifest.sample_rate = doc["sample_rate"].get<int>();
  manifest.inventory_path = Resolve(base, RequireString(doc, "inventory", where));
  RequireFile(manifest.inventory_path);

  if (!doc.contains("utterances") || !doc["utterances"].is_array()) {
    Fail(ErrorCategory::kFormat, where + ": missing utterances array");
  }
  if (doc["utterances"].empty()) {
    Fail(ErrorCategory::kFormat, where + ": empty manifest");
  }

  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& node : doc["utterances"]) {
    const std::string entry_where =
        where + " entry " + std::to_string(manifest.entries.size());
    Utterance utt;
    utt.talker_id = RequireString(node, "talker", entry_where);
    utt.utterance_id = RequireString(node, "utterance", entry_where);
    utt.outer_path = Resolve(base, RequireString(node, "outer", entry_where));
    utt.inear_path = Resolve(base, RequireString(node, "inear", entry_where));
    utt.label_path = Resolve(base, RequireString(node, "labels", entry_where));
    const auto split = ParseSplit(RequireString(node, "split", entry_where));
    if (!split) {
      Fail(ErrorCategory::kFormat,
           entry_where + ": split must be 'identify' or 'evaluate'");
    }
    utt.split = *split;
    if (!keys.emplace(utt.talker_id, utt.utterance_id).second) {
      Fail(ErrorCategory::kFormat, where + ": duplicate entry " +
                                       utt.talker_id + "/" + utt.utterance_id);
    }

    RequireFile(utt.outer_path);
    RequireFile(utt.inear_path);
    RequireFile(utt.label_path);
    const WavInfo outer = ReadWavInfo(utt.outer_path);
    const WavInfo inear = ReadWavInfo(utt.inear_path);
    for (const auto* info : {&outer, &inear}) {
      if (info->sample_rate != manifest.sample_rate) {
        Fail(ErrorCategory::kFormat,
             entry_where + ": audio at " + std::to_string(info->sample_rate) +
                 " Hz in a " + std::to_string(manifest.sample_rate) +
                 " Hz manifest");
      }
      if (info->channels != 1) {
        Fail(ErrorCategory::kFormat, entry_where + ": multichannel unsupported");
      }
    }
    if (outer.num_samples != inear.num_samples || outer.num_samples == 0) {
      Fail(ErrorCategory::kFormat,
           entry_where + ": outer and in-ear recordings differ in length");
    }
    utt.num_samples = outer.num_samples;
    manifest.entries.push_back(std::move(utt));
  }
  return manifest;
}

void SaveManifest(const std::filesystem::path& path, const Manifest& manifest) {
  const auto base = path.parent_path();
  json doc;
  doc["format"] = kManifestFormat;
  doc["version"] = kManifestVersion;
  doc["sample_rate"] = manifest.sample_rate;
  doc["inventory"] = Relativize(base, manifest.inventory_path);
  doc["utterances"] = json::array();
  for (const auto& utt : manifest.entries) {
    doc["utterances"].push_back({
        {"talker", utt.talker_id},
        {"utterance", utt.utterance_id},
        {"split", SplitName(utt.split)},
        {"outer", Relativize(base, utt.outer_path)},
        {"inear", Relativize(base, utt.inear_path)},
        {"labels", Relativize(base, utt.label_path)},
    });
  }
  std::ofstream out(path);
  if (!out) Fail(ErrorCategory::kIo, "cannot write manifest " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace ownvoice
