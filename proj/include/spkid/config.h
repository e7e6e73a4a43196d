// include/spkid/config.h

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

#ifndef SPKID_CONFIG_H_
#define SPKID_CONFIG_H_

#include <cstdint>

namespace spkid {

// Every tunable constant of the pipeline, from framing through the
// classifier. Defaults correspond to 16 kHz audio with 25 ms / 10 ms framing.
struct PipelineConfig {
  int sample_rate = 16000;
  int frame_len = 400;
  int frame_shift = 160;
  double preemph_coeff = 0.97;
  double silence_fraction = 0.1;
  int fft_size = 512;
  int mel_bins = 26;
  int cepstral_count = 12;
  int dct_norm_len = 26;
  double cluster_radius = 0.5;
  double accept_ratio = 0.5;
  double reject_ratio = 0.15;
  double width_spread = 1.0;
  double ridge_lambda = 1e-6;
  // When false, enrollment skips fitting the shared RBF output layer and
  // only the distortion decision rule is available.
  bool train_rbf = true;

  // Throws Error(kInvalidConfig) when any field or cross-field invariant is
  // violated.
  void Validate() const;

  // Stable hash of the front-end fields; stamped onto feature sequences so
  // that features computed under different settings are never mixed.
  std::uint64_t Fingerprint() const;

  // Frame geometry derived from millisecond durations at the given rate;
  // fft_size becomes the smallest power of two >= frame_len (at least 256).
  static PipelineConfig ForSampleRate(int sample_rate, double frame_ms = 25.0,
                                      double shift_ms = 10.0);

  bool operator==(const PipelineConfig &) const = default;
};

}  // namespace spkid

#endif  // SPKID_CONFIG_H_
