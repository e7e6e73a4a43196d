// tests/audio_io_test.cc

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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "spkid/audio_io.h"
#include "spkid/error.h"
#include "test_util.h"

namespace spkid {
namespace {

void Put(std::vector<std::byte> &b, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) b.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
}

void PutTag(std::vector<std::byte> &b, const char *tag) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::byte>(tag[i]));
}

// Hand-assembled WAVE image; data holds the raw interleaved sample bytes.
std::vector<std::byte> MakeWav(std::uint16_t format, std::uint16_t channels, std::uint32_t rate,
                               std::uint16_t bits, const std::vector<std::byte> &data,
                               std::uint32_t declared_data_size = UINT32_MAX) {
  std::vector<std::byte> b;
  PutTag(b, "RIFF");
  Put(b, 36 + static_cast<std::uint32_t>(data.size()), 4);
  PutTag(b, "WAVE");
  PutTag(b, "fmt ");
  Put(b, 16, 4);
  Put(b, format, 2);
  Put(b, channels, 2);
  Put(b, rate, 4);
  Put(b, rate * channels * (bits / 8), 4);
  Put(b, channels * (bits / 8), 2);
  Put(b, bits, 2);
  PutTag(b, "data");
  Put(b, declared_data_size == UINT32_MAX ? static_cast<std::uint32_t>(data.size()) : declared_data_size, 4);
  b.insert(b.end(), data.begin(), data.end());
  return b;
}

std::vector<std::byte> Samples16(std::initializer_list<int> values) {
  std::vector<std::byte> d;
  for (int v : values) Put(d, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)), 2);
  return d;
}

ErrorCode CodeOf(const std::vector<std::byte> &bytes) {
  try {
    DecodeWav(bytes);
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidConfig;
}

TEST_CASE("16-bit full-scale negative and zero") {
  const auto s = DecodeWav(MakeWav(1, 1, 16000, 16, Samples16({-32768, 0, 16384})));
  REQUIRE(s.size() == 3);
  CHECK(s.sample_rate == 16000);
  CHECK(s.samples[0] == -1.0);
  CHECK(s.samples[1] == 0.0);
  CHECK(s.samples[2] == 0.5);
}

TEST_CASE("stereo downmix averages channels") {
  const auto s = DecodeWav(MakeWav(1, 2, 8000, 16, Samples16({16384, -16384, 1000, 1000})));
  REQUIRE(s.size() == 2);
  CHECK(s.samples[0] == 0.0);
  // Identical channels reproduce the channel exactly.
  CHECK(s.samples[1] == 1000.0 / 32768.0);
}

TEST_CASE("identical channels downmix to the channel for any width") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> u(-32768, 32767);
  std::vector<std::byte> mono, quad;
  for (int i = 0; i < 200; ++i) {
    const auto v = static_cast<std::uint16_t>(static_cast<std::int16_t>(u(rng)));
    Put(mono, v, 2);
    for (int c = 0; c < 4; ++c) Put(quad, v, 2);
  }
  const auto a = DecodeWav(MakeWav(1, 1, 16000, 16, mono));
  const auto b = DecodeWav(MakeWav(1, 4, 16000, 16, quad));
  CHECK(a.samples == b.samples);
}

TEST_CASE("8, 24 and 32-bit PCM scale by the type's maximum magnitude") {
  std::vector<std::byte> d8{std::byte{0}, std::byte{128}, std::byte{192}};
  const auto s8 = DecodeWav(MakeWav(1, 1, 8000, 8, d8));
  CHECK(s8.samples == std::vector<double>{-1.0, 0.0, 0.5});

  std::vector<std::byte> d24;
  Put(d24, 0x800000, 3);  // most negative
  Put(d24, 0x400000, 3);
  const auto s24 = DecodeWav(MakeWav(1, 1, 8000, 24, d24));
  CHECK(s24.samples == std::vector<double>{-1.0, 0.5});

  std::vector<std::byte> d32;
  Put(d32, 0x80000000u, 4);
  Put(d32, 0xC0000000u, 4);
  const auto s32 = DecodeWav(MakeWav(1, 1, 8000, 32, d32));
  CHECK(s32.samples == std::vector<double>{-1.0, -0.5});
}

TEST_CASE("sine round trip through 16-bit file") {
  testing::TempDir dir("audio");
  AudioSignal sine;
  sine.sample_rate = 16000;
  for (int n = 0; n < 4000; ++n) sine.samples.push_back(0.8 * std::sin(2.0 * std::numbers::pi * 440.0 * n / 16000.0));
  WriteWav16(dir / "sine.wav", sine);
  const auto back = LoadWav(dir / "sine.wav");
  REQUIRE(back.size() == sine.size());
  CHECK(back.sample_rate == 16000);
  for (std::size_t i = 0; i < sine.size(); ++i) CHECK(std::abs(back.samples[i] - sine.samples[i]) <= 1.0 / 32768.0);
}

TEST_CASE("malformed inputs") {
  CHECK(CodeOf(MakeWav(3, 1, 16000, 32, Samples16({0, 0}))) == ErrorCode::kUnsupportedFormat);
  CHECK(CodeOf(MakeWav(1, 0, 16000, 16, Samples16({0}))) == ErrorCode::kUnsupportedFormat);
  CHECK(CodeOf(MakeWav(1, 1, 16000, 16, {})) == ErrorCode::kEmptyAudio);
  CHECK(CodeOf(MakeWav(1, 1, 16000, 16, Samples16({1, 2}), 400)) == ErrorCode::kCorruptFile);

  auto truncated = MakeWav(1, 1, 16000, 16, Samples16({1, 2}));
  truncated.resize(20);
  CHECK(CodeOf(truncated) == ErrorCode::kCorruptFile);
  truncated.resize(6);
  CHECK(CodeOf(truncated) == ErrorCode::kCorruptFile);

  auto not_riff = MakeWav(1, 1, 16000, 16, Samples16({1}));
  not_riff[0] = std::byte{'X'};
  CHECK(CodeOf(not_riff) == ErrorCode::kUnsupportedFormat);
}

TEST_CASE("missing file is an IO failure") {
  try {
    LoadWav("/nonexistent/definitely/missing.wav");
    FAIL("expected throw");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kIoFailure);
  }
}

}  // namespace
}  // namespace spkid
