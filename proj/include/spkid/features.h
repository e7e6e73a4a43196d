// include/spkid/features.h

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

#ifndef SPKID_FEATURES_H_
#define SPKID_FEATURES_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "spkid/audio_io.h"
#include "spkid/config.h"
#include "spkid/preprocess.h"
#include "spkid/types.h"

namespace spkid {

inline constexpr double kLogFloor = 1e-10;

struct MelSpectrum {
  std::vector<double> values;
  std::vector<double> log_values;
};

// T x D matrix of cepstral vectors.
struct FeatureSequence {
  Matrix vectors;
  std::uint64_t config_fingerprint = 0;

  Eigen::Index num_frames() const { return vectors.rows(); }
  Eigen::Index dim() const { return vectors.cols(); }
};

double HzToMel(double hz);
double MelToHz(double mel);

// Magnitudes of the first fft_size / 2 + 1 DFT bins of the zero-padded frame.
std::vector<double> MagnitudeSpectrum(std::span<const double> frame, int fft_size);

// mel_bins x (fft_size / 2 + 1) triangular filters with peaks equally spaced
// on the mel scale between 0 Hz and the Nyquist frequency.
class MelFilterbank {
 public:
  MelFilterbank(int sample_rate, int fft_size, int mel_bins);

  int num_bins() const { return static_cast<int>(weights_.rows()); }
  int num_fft_bins() const { return static_cast<int>(weights_.cols()); }
  const Matrix &weights() const { return weights_; }
  // Peak frequency of each filter in Hz.
  const std::vector<double> &peaks_hz() const { return peaks_hz_; }

 private:
  Matrix weights_;
  std::vector<double> peaks_hz_;
};

MelSpectrum MelEnergies(std::span<const double> spectrum, const MelFilterbank &bank);

// Coefficients i = 1..cepstral_count of
//   c_i = sum_{b=1..B} L_b cos(i (b - 0.5) pi / dct_norm_len).
std::vector<double> DctCepstrum(std::span<const double> log_values, int cepstral_count,
                                int dct_norm_len);

// Per-frame stages after silence removal: pre-emphasis, window, spectrum,
// mel binning, log and cosine transform. Holds the precomputed window and
// filterbank; immutable and shareable across threads.
class FrameAnalyzer {
 public:
  explicit FrameAnalyzer(const PipelineConfig &config);

  const PipelineConfig &config() const { return config_; }
  const MelFilterbank &filterbank() const { return bank_; }

  // Writes cepstral_count coefficients to out.
  void Analyze(std::span<const double> frame, std::span<double> out) const;

 private:
  PipelineConfig config_;
  std::vector<double> window_;
  MelFilterbank bank_;
};

// Full front end: DC removal, framing, silence removal and per-frame MFCC.
// Throws Error(kAllSilent) when no frame survives silence removal.
FeatureSequence ExtractFeatures(const AudioSignal &signal, const PipelineConfig &config);

// One row per frame, comma-separated, full round-trip precision.
void WriteFeatureDump(std::ostream &os, const FeatureSequence &features);

}  // namespace spkid

#endif  // SPKID_FEATURES_H_
