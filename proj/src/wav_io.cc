// src/wav_io.cc

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

#include "ownvoice/wav_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "ownvoice/error.h"

namespace ownvoice {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t Le32(const unsigned char* p) {
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 |
         std::uint32_t{p[2]} << 16 | std::uint32_t{p[3]} << 24;
}
std::uint16_t Le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void Put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}
void Put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

struct ParsedWav {
  WavInfo info;
  const unsigned char* data = nullptr;
};

std::vector<unsigned char> Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCategory::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ParsedWav Parse(const std::vector<unsigned char>& bytes,
                const std::string& name) {
  auto bad = [&](const std::string& what) {
    Fail(ErrorCategory::kFormat, name + ": " + what);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    bad("not a RIFF/WAVE file");
  }
  ParsedWav parsed;
  bool have_fmt = false;
  std::uint16_t bits = 0;
  std::uint16_t format = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t size = Le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + size > bytes.size()) bad("truncated fmt chunk");
      format = Le16(chunk + 8);
      parsed.info.channels = Le16(chunk + 10);
      parsed.info.sample_rate = static_cast<int>(Le32(chunk + 12));
      bits = Le16(chunk + 22);
      if (format == kFormatExtensible) {
        if (size < 26) bad("truncated extensible fmt chunk");
        format = Le16(chunk + 32);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) bad("data chunk before fmt chunk");
      if (body + size > bytes.size()) bad("truncated data chunk");
      if (format == kFormatPcm && bits == 16) {
        parsed.info.encoding = WavEncoding::kPcm16;
      } else if (format == kFormatFloat && bits == 32) {
        parsed.info.encoding = WavEncoding::kFloat32;
      } else {
        Fail(ErrorCategory::kFormat,
             name + ": unsupported encoding (format " + std::to_string(format) +
                 ", " + std::to_string(bits) + " bits)");
      }
      if (parsed.info.channels < 1) bad("zero channels");
      if (parsed.info.sample_rate <= 0) bad("invalid sample rate");
      const std::size_t frame_bytes =
          static_cast<std::size_t>(bits / 8) * parsed.info.channels;
      parsed.info.num_samples = size / frame_bytes;
      parsed.data = bytes.data() + body;
      return parsed;
    }
    pos = body + size + (size & 1);
  }
  bad(have_fmt ? "missing data chunk" : "missing fmt chunk");
  return parsed;
}

}  // namespace

WavInfo ReadWavInfo(const std::filesystem::path& path) {
  return Parse(Slurp(path), path.string()).info;
}

WavData ReadWav(const std::filesystem::path& path) {
  const auto bytes = Slurp(path);
  const ParsedWav parsed = Parse(bytes, path.string());
  if (parsed.info.channels != 1) {
    Fail(ErrorCategory::kFormat,
         path.string() + ": multichannel unsupported (" +
             std::to_string(parsed.info.channels) + " channels)");
  }
  WavData wav;
  wav.sample_rate = parsed.info.sample_rate;
  wav.samples.resize(parsed.info.num_samples);
  const unsigned char* p = parsed.data;
  for (std::size_t n = 0; n < wav.samples.size(); ++n) {
    if (parsed.info.encoding == WavEncoding::kPcm16) {
      const auto value = static_cast<std::int16_t>(Le16(p + 2 * n));
      wav.samples[n] = value / 32768.0;
    } else {
      wav.samples[n] = std::bit_cast<float>(Le32(p + 4 * n));
    }
  }
  return wav;
}

void WriteWav(const std::filesystem::path& path,
              std::span<const double> samples, int sample_rate,
              WavEncoding encoding) {
  if (sample_rate <= 0) {
    Fail(ErrorCategory::kInvalidArgument, "sample rate must be positive");
  }
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(samples.size() * (bits / 8));

  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  Put32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  Put32(out, 16);
  Put16(out, pcm ? kFormatPcm : kFormatFloat);
  Put16(out, 1);
  Put32(out, static_cast<std::uint32_t>(sample_rate));
  Put32(out, static_cast<std::uint32_t>(sample_rate) * (bits / 8));
  Put16(out, bits / 8);
  Put16(out, bits);
  out += "data";
  Put32(out, data_bytes);
  for (double x : samples) {
    if (pcm) {
      const double scaled = std::clamp(std::round(x * 32768.0), -32768.0, 32767.0);
      Put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    } else {
      Put32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) Fail(ErrorCategory::kIo, "cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) Fail(ErrorCategory::kIo, "write failed for " + path.string());
}

}  // namespace ownvoice
