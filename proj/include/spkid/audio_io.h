// include/spkid/audio_io.h

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

#ifndef SPKID_AUDIO_IO_H_
#define SPKID_AUDIO_IO_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace spkid {

/// Mono waveform with amplitudes in [-1, 1].
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = 0;

  std::size_t size() const { return samples.size(); }
};

/// Decodes a RIFF/WAVE image holding 8, 16, 24 or 32-bit integer PCM.
/// Multi-channel audio is averaged down to mono.
AudioSignal DecodeWav(std::span<const std::byte> bytes);

AudioSignal LoadWav(const std::filesystem::path &path);

/// Encodes a mono 16-bit PCM image. Samples are clamped to [-1, 1] and
/// quantized by rounding x * 32768.
std::vector<std::byte> EncodeWav16(const AudioSignal &signal);

void WriteWav16(const std::filesystem::path &path, const AudioSignal &signal);

}  // namespace spkid

#endif  // SPKID_AUDIO_IO_H_
