// src/audio_io.cc

// Copyright 2026 The spkid Authors
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

#include "spkid/audio_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "spkid/error.h"

namespace spkid {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t ReadU32(std::span<const std::byte> b, std::size_t at) {
  return std::to_integer<std::uint32_t>(b[at]) |
         (std::to_integer<std::uint32_t>(b[at + 1]) << 8) |
         (std::to_integer<std::uint32_t>(b[at + 2]) << 16) |
         (std::to_integer<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t ReadU16(std::span<const std::byte> b, std::size_t at) {
  return static_cast<std::uint16_t>(std::to_integer<std::uint32_t>(b[at]) |
                                    (std::to_integer<std::uint32_t>(b[at + 1]) << 8));
}

bool TagIs(std::span<const std::byte> b, std::size_t at, const char *tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

// Signed little-endian integer of 1..4 bytes, already mapped to [-1, 1).
double DecodeSample(const std::byte *p, int bytes_per_sample) {
  switch (bytes_per_sample) {
    case 1:
      // 8-bit PCM is unsigned with a 128 offset.
      return (std::to_integer<int>(p[0]) - 128) / 128.0;
    case 2: {
      auto v = static_cast<std::int16_t>(std::to_integer<std::uint16_t>(p[0]) |
                                         (std::to_integer<std::uint16_t>(p[1]) << 8));
      return v / 32768.0;
    }
    case 3: {
      std::uint32_t u = std::to_integer<std::uint32_t>(p[0]) |
                        (std::to_integer<std::uint32_t>(p[1]) << 8) |
                        (std::to_integer<std::uint32_t>(p[2]) << 16);
      if (u & 0x800000u) u |= 0xFF000000u;
      return static_cast<std::int32_t>(u) / 8388608.0;
    }
    default: {
      std::uint32_t u = std::to_integer<std::uint32_t>(p[0]) |
                        (std::to_integer<std::uint32_t>(p[1]) << 8) |
                        (std::to_integer<std::uint32_t>(p[2]) << 16) |
                        (std::to_integer<std::uint32_t>(p[3]) << 24);
      return static_cast<std::int32_t>(u) / 2147483648.0;
    }
  }
}

void PutU32(std::vector<std::byte> &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
}

void PutU16(std::vector<std::byte> &out, std::uint16_t v) {
  out.push_back(static_cast<std::byte>(v & 0xFF));
  out.push_back(static_cast<std::byte>(v >> 8));
}

void PutTag(std::vector<std::byte> &out, const char *tag) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>(tag[i]));
}

}  // namespace

AudioSignal DecodeWav(std::span<const std::byte> bytes) {
  if (bytes.size() < 12) throw Error(ErrorCode::kCorruptFile, "file shorter than RIFF header");
  if (!TagIs(bytes, 0, "RIFF") || !TagIs(bytes, 8, "WAVE"))
    throw Error(ErrorCode::kUnsupportedFormat, "not a RIFF/WAVE container");

  bool have_fmt = false;
  std::uint16_t channels = 0, bits = 0, block_align = 0;
  std::uint32_t sample_rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t chunk_size = ReadU32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (TagIs(bytes, pos, "fmt ")) {
      if (chunk_size < 16 || body + chunk_size > bytes.size())
        throw Error(ErrorCode::kCorruptFile, "truncated fmt chunk");
      std::uint16_t format = ReadU16(bytes, body);
      channels = ReadU16(bytes, body + 2);
      sample_rate = ReadU32(bytes, body + 4);
      block_align = ReadU16(bytes, body + 12);
      bits = ReadU16(bytes, body + 14);
      if (format == kFormatExtensible) {
        if (chunk_size < 40) throw Error(ErrorCode::kCorruptFile, "truncated extensible fmt chunk");
        format = ReadU16(bytes, body + 24);  // first two bytes of the subformat GUID
      }
      if (format != kFormatPcm)
        throw Error(ErrorCode::kUnsupportedFormat,
                    "codec " + std::to_string(format) + " is not integer PCM");
      if (channels == 0) throw Error(ErrorCode::kUnsupportedFormat, "zero channels");
      if (bits != 8 && bits != 16 && bits != 24 && bits != 32)
        throw Error(ErrorCode::kUnsupportedFormat, std::to_string(bits) + "-bit PCM");
      if (sample_rate == 0) throw Error(ErrorCode::kUnsupportedFormat, "zero sample rate");
      if (block_align != channels * (bits / 8))
        throw Error(ErrorCode::kCorruptFile, "inconsistent block alignment");
      have_fmt = true;
    } else if (TagIs(bytes, pos, "data")) {
      if (!have_fmt) throw Error(ErrorCode::kCorruptFile, "data chunk before fmt chunk");
      if (body + chunk_size > bytes.size())
        throw Error(ErrorCode::kCorruptFile, "data chunk extends past end of file");
      const std::size_t num_frames = chunk_size / block_align;
      if (num_frames == 0) throw Error(ErrorCode::kEmptyAudio, "no samples in data chunk");
      const int width = bits / 8;
      AudioSignal signal;
      signal.sample_rate = static_cast<int>(sample_rate);
      signal.samples.resize(num_frames);
      const std::byte *p = bytes.data() + body;
      for (std::size_t i = 0; i < num_frames; ++i) {
        double sum = 0.0;
        for (int c = 0; c < channels; ++c, p += width) sum += DecodeSample(p, width);
        signal.samples[i] = sum / channels;
      }
      return signal;
    }
    // Chunks are padded to even length.
    pos = body + chunk_size + (chunk_size & 1u);
  }
  if (!have_fmt) throw Error(ErrorCode::kCorruptFile, "missing fmt chunk");
  throw Error(ErrorCode::kCorruptFile, "missing data chunk");
}

AudioSignal LoadWav(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> bytes(raw.size());
  std::memcpy(bytes.data(), raw.data(), raw.size());
  try {
    return DecodeWav(bytes);
  } catch (const Error &e) {
    throw Error(e.code(), path.string() + ": " + std::string(e.what()));
  }
}

std::vector<std::byte> EncodeWav16(const AudioSignal &signal) {
  const auto data_size = static_cast<std::uint32_t>(signal.samples.size() * 2);
  std::vector<std::byte> out;
  out.reserve(44 + data_size);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_size);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, kFormatPcm);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(signal.sample_rate));
  PutU32(out, static_cast<std::uint32_t>(signal.sample_rate) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  PutTag(out, "data");
  PutU32(out, data_size);
  for (double x : signal.samples) {
    const double q = std::round(std::clamp(x, -1.0, 1.0) * 32768.0);
    const auto v = static_cast<std::int16_t>(std::clamp(q, -32768.0, 32767.0));
    PutU16(out, static_cast<std::uint16_t>(v));
  }
  return out;
}

void WriteWav16(const std::filesystem::path &path, const AudioSignal &signal) {
  const auto bytes = EncodeWav16(signal);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

}  // namespace spkid
