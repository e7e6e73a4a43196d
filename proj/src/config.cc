// src/config.cc

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

#include "spkid/config.h"

#include <bit>
#include <cmath>
#include <string>

#include "spkid/error.h"

namespace spkid {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kCorruptFile: return "CorruptFile";
    case ErrorCode::kEmptyAudio: return "EmptyAudio";
    case ErrorCode::kEmptyFrame: return "EmptyFrame";
    case ErrorCode::kEmptySequence: return "EmptySequence";
    case ErrorCode::kSignalTooShort: return "SignalTooShort";
    case ErrorCode::kFrameTooShort: return "FrameTooShort";
    case ErrorCode::kBadFftSize: return "BadFftSize";
    case ErrorCode::kTooManyBins: return "TooManyBins";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kBadCoefficientCount: return "BadCoefficientCount";
    case ErrorCode::kAllSilent: return "AllSilent";
    case ErrorCode::kEmptyData: return "EmptyData";
    case ErrorCode::kBadRadius: return "BadRadius";
    case ErrorCode::kBadRatios: return "BadRatios";
    case ErrorCode::kBadWidth: return "BadWidth";
    case ErrorCode::kSolveFailure: return "SolveFailure";
    case ErrorCode::kDuplicateSpeaker: return "DuplicateSpeaker";
    case ErrorCode::kSampleRateMismatch: return "SampleRateMismatch";
    case ErrorCode::kEmptyFeatures: return "EmptyFeatures";
    case ErrorCode::kEmptyDatabase: return "EmptyDatabase";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kCorruptDatabase: return "CorruptDatabase";
    case ErrorCode::kManifestParse: return "ManifestParse";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

namespace {

void Require(bool ok, const std::string &what) {
  if (!ok) throw Error(ErrorCode::kInvalidConfig, what);
}

bool IsPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

void PipelineConfig::Validate() const {
  Require(sample_rate > 0, "sample_rate must be positive");
  Require(frame_len >= 2, "frame_len must be at least 2 samples");
  Require(frame_shift >= 1, "frame_shift must be positive");
  Require(frame_shift <= frame_len, "frame_shift must not exceed frame_len");
  Require(preemph_coeff >= 0.0 && preemph_coeff < 1.0, "preemph_coeff must lie in [0, 1)");
  Require(silence_fraction >= 0.0 && silence_fraction <= 1.0,
          "silence_fraction must lie in [0, 1]");
  Require(IsPowerOfTwo(fft_size), "fft_size must be a power of two");
  Require(fft_size >= frame_len, "fft_size must be at least frame_len");
  Require(mel_bins >= 2, "mel_bins must be at least 2");
  Require(cepstral_count >= 1, "cepstral_count must be positive");
  Require(cepstral_count <= mel_bins, "cepstral_count must not exceed mel_bins");
  Require(dct_norm_len >= 1, "dct_norm_len must be positive");
  Require(cluster_radius > 0.0 && std::isfinite(cluster_radius), "cluster_radius must be positive");
  Require(reject_ratio > 0.0 && reject_ratio < accept_ratio && accept_ratio <= 1.0,
          "ratios must satisfy 0 < reject < accept <= 1");
  Require(width_spread > 0.0, "width_spread must be positive");
  Require(ridge_lambda >= 0.0 && std::isfinite(ridge_lambda), "ridge_lambda must be >= 0");
}

std::uint64_t PipelineConfig::Fingerprint() const {
  // FNV-1a over the fields' bit patterns.
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 0x100000001b3ull;
    }
  };
  auto mix_real = [&mix](double v) { mix(std::bit_cast<std::uint64_t>(v)); };
  mix(static_cast<std::uint64_t>(sample_rate));
  mix(static_cast<std::uint64_t>(frame_len));
  mix(static_cast<std::uint64_t>(frame_shift));
  mix_real(preemph_coeff);
  mix_real(silence_fraction);
  mix(static_cast<std::uint64_t>(fft_size));
  mix(static_cast<std::uint64_t>(mel_bins));
  mix(static_cast<std::uint64_t>(cepstral_count));
  mix(static_cast<std::uint64_t>(dct_norm_len));
  return h;
}

PipelineConfig PipelineConfig::ForSampleRate(int sample_rate, double frame_ms, double shift_ms) {
  PipelineConfig c;
  c.sample_rate = sample_rate;
  c.frame_len = static_cast<int>(std::lround(sample_rate * frame_ms / 1000.0));
  c.frame_shift = static_cast<int>(std::lround(sample_rate * shift_ms / 1000.0));
  c.fft_size = 256;
  while (c.fft_size < c.frame_len) c.fft_size *= 2;
  return c;
}

}  // namespace spkid
