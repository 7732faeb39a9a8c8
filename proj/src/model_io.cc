// src/model_io.cc

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

#include "ownvoice/model_io.h"

#include <zlib.h>

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <vector>

#include "ownvoice/error.h"

namespace ownvoice {
namespace {

constexpr std::string_view kMagic = "ownvoice-model";
constexpr std::string_view kMetaPrefix = "meta.";

std::string FormatDouble(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

double ParseDouble(const std::string& text, const std::string& key) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    Fail(ErrorCategory::kFormat, "model header: bad number for " + key);
  }
  return value;
}

long long ParseInt(const std::string& text, const std::string& key) {
  char* end = nullptr;
  const long long value = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size()) {
    Fail(ErrorCategory::kFormat, "model header: bad integer for " + key);
  }
  return value;
}

void AppendComplex(std::string& out, std::span<const Complex> values) {
  for (const Complex& c : values) {
    for (double part : {c.real(), c.imag()}) {
      const auto bits = std::bit_cast<std::uint64_t>(part);
      for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
      }
    }
  }
}

class PayloadReader {
 public:
  explicit PayloadReader(const std::string& bytes) : bytes_(bytes) {}

  std::vector<Complex> Take(std::size_t count) {
    std::vector<Complex> values(count);
    for (auto& c : values) c = {Next(), Next()};
    return values;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  double Next() {
    if (pos_ + 8 > bytes_.size()) {
      Fail(ErrorCategory::kFormat, "model payload shorter than declared shape");
    }
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
      bits |= std::uint64_t{static_cast<unsigned char>(bytes_[pos_ + i])}
              << (8 * i);
    }
    pos_ += 8;
    return std::bit_cast<double>(bits);
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t Crc32(const std::string& bytes) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()),
            static_cast<uInt>(bytes.size())));
}

std::optional<TransferKind> ParseKind(const std::string& name) {
  for (auto kind : {TransferKind::kSpeechIndependent,
                    TransferKind::kSpeechDependent, TransferKind::kAdaptive}) {
    if (TransferKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

}  // namespace

std::string_view TransferKindName(TransferKind kind) {
  switch (kind) {
    case TransferKind::kSpeechIndependent: return "speech-independent";
    case TransferKind::kSpeechDependent: return "speech-dependent";
    case TransferKind::kAdaptive: return "adaptive";
  }
  return "unknown";
}

TransferKind TransferModel::kind() const {
  return static_cast<TransferKind>(body.index());
}

void WriteModel(std::ostream& out, const TransferModel& model) {
  std::vector<std::pair<std::string, std::string>> header;
  header.emplace_back("kind", std::string(TransferKindName(model.kind())));
  header.emplace_back("sample_rate", FormatDouble(model.frame.sample_rate));
  header.emplace_back("frame_length", std::to_string(model.frame.frame_length));
  header.emplace_back("hop", std::to_string(model.frame.hop));
  header.emplace_back("window", "sqrt-hann");

  std::string payload;
  if (const auto* si = std::get_if<SpeechIndependentModel>(&model.body)) {
    header.emplace_back("bins", std::to_string(si->rtf.size()));
    AppendComplex(payload, si->rtf);
  } else if (const auto* sd = std::get_if<SpeechDependentModel>(&model.body)) {
    if (sd->rtf_table.size() != sd->num_bins * sd->num_phonemes ||
        sd->valid.size() != static_cast<std::size_t>(sd->num_phonemes) ||
        sd->fallback.rtf.size() != sd->num_bins) {
      Fail(ErrorCategory::kShapeMismatch, "inconsistent speech-dependent model");
    }
    std::string valid;
    for (bool v : sd->valid) valid.push_back(v ? '1' : '0');
    header.emplace_back("phonemes", std::to_string(sd->num_phonemes));
    header.emplace_back("bins", std::to_string(sd->num_bins));
    header.emplace_back("alpha", FormatDouble(sd->smoothing_alpha));
    header.emplace_back("valid", valid);
    AppendComplex(payload, sd->fallback.rtf);
    AppendComplex(payload, sd->rtf_table);
  } else {
    const auto& nlms = std::get<NlmsConfig>(model.body);
    header.emplace_back("filter_length", std::to_string(nlms.filter_length));
    header.emplace_back("step_size", FormatDouble(nlms.step_size));
    header.emplace_back("regularization", FormatDouble(nlms.regularization));
  }
  for (const auto& [key, value] : model.metadata) {
    if (key.empty() || key.find_first_of(" =\n\r") != std::string::npos ||
        value.find_first_of("\n\r") != std::string::npos) {
      Fail(ErrorCategory::kInvalidArgument,
           "model metadata must be single-line key/value pairs");
    }
    header.emplace_back(std::string(kMetaPrefix) + key, value);
  }
  header.emplace_back("payload_bytes", std::to_string(payload.size()));
  char crc[16];
  std::snprintf(crc, sizeof(crc), "%08x", Crc32(payload));
  header.emplace_back("payload_crc32", crc);

  out << kMagic << ' ' << kModelFormatVersion << '\n';
  for (const auto& [key, value] : header) out << key << " = " << value << '\n';
  out << "end\n";
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

TransferModel ReadModel(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    Fail(ErrorCategory::kFormat, "empty model file");
  }
  {
    std::istringstream first(line);
    std::string magic;
    int version = 0;
    first >> magic >> version;
    if (magic != kMagic) Fail(ErrorCategory::kFormat, "not an ownvoice model");
    if (version != kModelFormatVersion) {
      Fail(ErrorCategory::kFormat,
           "model format version " + std::to_string(version) +
               " is not supported (expected " +
               std::to_string(kModelFormatVersion) + ")");
    }
  }

  std::map<std::string, std::string> fields;
  TransferModel model;
  bool ended = false;
  while (std::getline(in, line)) {
    if (line == "end") {
      ended = true;
      break;
    }
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) {
      Fail(ErrorCategory::kFormat, "malformed model header line '" + line + "'");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 3);
    if (key.starts_with(kMetaPrefix)) {
      model.metadata[key.substr(kMetaPrefix.size())] = value;
    } else {
      fields[key] = value;
    }
  }
  if (!ended) Fail(ErrorCategory::kFormat, "model header is not terminated");

  auto take = [&](const std::string& key) {
    auto it = fields.find(key);
    if (it == fields.end()) {
      Fail(ErrorCategory::kFormat, "model header lacks '" + key + "'");
    }
    std::string value = it->second;
    fields.erase(it);
    return value;
  };

  const std::string declared_bytes = take("payload_bytes");
  const std::string declared_crc = take("payload_crc32");
  const auto payload_size =
      static_cast<std::size_t>(ParseInt(declared_bytes, "payload_bytes"));
  std::string payload(payload_size, '\0');
  in.read(payload.data(), static_cast<std::streamsize>(payload_size));
  payload.resize(static_cast<std::size_t>(in.gcount()));
  char crc[16];
  std::snprintf(crc, sizeof(crc), "%08x", Crc32(payload));
  if (payload.size() != payload_size || declared_crc != crc) {
    Fail(ErrorCategory::kChecksum,
         "model payload checksum mismatch (file truncated or corrupt)");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    Fail(ErrorCategory::kFormat, "trailing bytes after model payload");
  }

  const auto kind = ParseKind(take("kind"));
  if (!kind) Fail(ErrorCategory::kFormat, "unknown model kind");
  model.frame.sample_rate = ParseDouble(take("sample_rate"), "sample_rate");
  model.frame.frame_length =
      static_cast<int>(ParseInt(take("frame_length"), "frame_length"));
  model.frame.hop = static_cast<int>(ParseInt(take("hop"), "hop"));
  if (take("window") != "sqrt-hann") {
    Fail(ErrorCategory::kFormat, "unsupported analysis window");
  }
  model.frame.Validate();

  PayloadReader reader(payload);
  switch (*kind) {
    case TransferKind::kSpeechIndependent: {
      const auto bins = static_cast<std::size_t>(ParseInt(take("bins"), "bins"));
      model.body = SpeechIndependentModel{reader.Take(bins)};
      break;
    }
    case TransferKind::kSpeechDependent: {
      SpeechDependentModel sd;
      sd.num_phonemes = static_cast<int>(ParseInt(take("phonemes"), "phonemes"));
      sd.num_bins = static_cast<std::size_t>(ParseInt(take("bins"), "bins"));
      sd.smoothing_alpha = ParseDouble(take("alpha"), "alpha");
      const std::string valid = take("valid");
      if (sd.num_phonemes < 1 ||
          valid.size() != static_cast<std::size_t>(sd.num_phonemes) ||
          valid.find_first_not_of("01") != std::string::npos) {
        Fail(ErrorCategory::kFormat, "model validity flags malformed");
      }
      for (char c : valid) sd.valid.push_back(c == '1');
      sd.fallback.rtf = reader.Take(sd.num_bins);
      sd.rtf_table = reader.Take(sd.num_bins * sd.num_phonemes);
      model.body = std::move(sd);
      break;
    }
    case TransferKind::kAdaptive: {
      NlmsConfig nlms;
      nlms.filter_length =
          static_cast<int>(ParseInt(take("filter_length"), "filter_length"));
      nlms.step_size = ParseDouble(take("step_size"), "step_size");
      nlms.regularization = ParseDouble(take("regularization"), "regularization");
      nlms.Validate();
      model.body = nlms;
      break;
    }
  }
  if (!reader.done()) {
    Fail(ErrorCategory::kFormat, "model payload longer than declared shape");
  }
  if (!fields.empty()) {
    Fail(ErrorCategory::kFormat,
         "unexpected model header field '" + fields.begin()->first + "'");
  }
  return model;
}

void SaveModel(const std::filesystem::path& path, const TransferModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCategory::kIo, "cannot write model " + path.string());
  WriteModel(out, model);
  if (!out) Fail(ErrorCategory::kIo, "write failed for " + path.string());
}

TransferModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCategory::kIo, "cannot open model " + path.string());
  try {
    return ReadModel(in);
  } catch (const Error& e) {
    throw Error(e.category(), path.string() + ": " + e.what());
  }
}

}  // namespace ownvoice
