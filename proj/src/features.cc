// src/features.cc

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

#include "spkid/features.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <ostream>

#include "spkid/error.h"
#include "spkid/kernels.h"

namespace spkid {

namespace {

bool IsPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT; size must be a power of two.
void Fft(std::vector<std::complex<double>> &a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      const std::complex<double> w = std::polar(1.0, angle * static_cast<double>(k));
      for (std::size_t i = k; i < n; i += len) {
        const std::complex<double> u = a[i];
        const std::complex<double> v = a[i + half] * w;
        a[i] = u + v;
        a[i + half] = u - v;
      }
    }
  }
}

}  // namespace

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<double> MagnitudeSpectrum(std::span<const double> frame, int fft_size) {
  if (!IsPowerOfTwo(fft_size))
    throw Error(ErrorCode::kBadFftSize, std::to_string(fft_size) + " is not a power of two");
  if (frame.size() > static_cast<std::size_t>(fft_size))
    throw Error(ErrorCode::kBadFftSize, "frame longer than fft_size");
  std::vector<std::complex<double>> buf(fft_size);
  for (std::size_t n = 0; n < frame.size(); ++n) buf[n] = frame[n];
  Fft(buf);
  std::vector<double> mag(fft_size / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(buf[k]);
  return mag;
}

MelFilterbank::MelFilterbank(int sample_rate, int fft_size, int mel_bins) {
  if (!IsPowerOfTwo(fft_size))
    throw Error(ErrorCode::kBadFftSize, std::to_string(fft_size) + " is not a power of two");
  if (mel_bins < 2 || fft_size < 2 * mel_bins)
    throw Error(ErrorCode::kTooManyBins, std::to_string(mel_bins) + " mel bins for fft size " +
                                             std::to_string(fft_size));
  const int num_fft_bins = fft_size / 2 + 1;
  const double mel_max = HzToMel(sample_rate / 2.0);
  std::vector<double> edges(mel_bins + 2);
  for (int k = 0; k < mel_bins + 2; ++k) edges[k] = MelToHz(mel_max * k / (mel_bins + 1));

  weights_ = Matrix::Zero(mel_bins, num_fft_bins);
  peaks_hz_.resize(mel_bins);
  const double bin_hz = static_cast<double>(sample_rate) / fft_size;
  for (int b = 0; b < mel_bins; ++b) {
    const double lower = edges[b], peak = edges[b + 1], upper = edges[b + 2];
    peaks_hz_[b] = peak;
    bool any = false;
    for (int j = 0; j < num_fft_bins; ++j) {
      const double f = j * bin_hz;
      double w = 0.0;
      if (f > lower && f <= peak)
        w = (f - lower) / (peak - lower);
      else if (f > peak && f < upper)
        w = (upper - f) / (upper - peak);
      weights_(b, j) = w;
      any = any || w > 0.0;
    }
    if (!any)
      throw Error(ErrorCode::kTooManyBins, "mel filter " + std::to_string(b) +
                                               " covers no FFT bin; lower mel_bins or raise fft_size");
  }
}

MelSpectrum MelEnergies(std::span<const double> spectrum, const MelFilterbank &bank) {
  if (spectrum.size() != static_cast<std::size_t>(bank.num_fft_bins()))
    throw Error(ErrorCode::kDimensionMismatch, "spectrum has " + std::to_string(spectrum.size()) +
                                                   " bins, filterbank expects " +
                                                   std::to_string(bank.num_fft_bins()));
  const Eigen::Map<const Vector> s(spectrum.data(), static_cast<Eigen::Index>(spectrum.size()));
  const Vector energies = bank.weights() * s;
  MelSpectrum out;
  out.values.assign(energies.data(), energies.data() + energies.size());
  out.log_values.resize(out.values.size());
  for (std::size_t b = 0; b < out.values.size(); ++b)
    out.log_values[b] = std::log(std::max(out.values[b], kLogFloor));
  return out;
}

std::vector<double> DctCepstrum(std::span<const double> log_values, int cepstral_count,
                                int dct_norm_len) {
  const int num_bins = static_cast<int>(log_values.size());
  if (cepstral_count < 1 || cepstral_count > num_bins)
    throw Error(ErrorCode::kBadCoefficientCount,
                std::to_string(cepstral_count) + " coefficients from " + std::to_string(num_bins) + " bins");
  if (dct_norm_len < 1) throw Error(ErrorCode::kBadCoefficientCount, "dct_norm_len must be positive");
  std::vector<double> out(cepstral_count);
  for (int i = 1; i <= cepstral_count; ++i) {
    double sum = 0.0;
    for (int b = 1; b <= num_bins; ++b)
      sum += log_values[b - 1] * std::cos(i * (b - 0.5) * std::numbers::pi / dct_norm_len);
    out[i - 1] = sum;
  }
  return out;
}

FrameAnalyzer::FrameAnalyzer(const PipelineConfig &config)
    : config_(config),
      window_(HammingWindow(config.frame_len)),
      bank_(config.sample_rate, config.fft_size, config.mel_bins) {}

void FrameAnalyzer::Analyze(std::span<const double> frame, std::span<double> out) const {
  if (frame.size() != window_.size())
    throw Error(ErrorCode::kDimensionMismatch, "frame length differs from configured frame_len");
  std::vector<double> work(frame.begin(), frame.end());
  PreemphasizeInPlace(work, config_.preemph_coeff);
  for (std::size_t n = 0; n < work.size(); ++n) work[n] *= window_[n];
  const auto spectrum = MagnitudeSpectrum(work, config_.fft_size);
  const auto mel = MelEnergies(spectrum, bank_);
  const auto cep = DctCepstrum(mel.log_values, config_.cepstral_count, config_.dct_norm_len);
  std::copy(cep.begin(), cep.end(), out.begin());
}

FeatureSequence ExtractFeatures(const AudioSignal &signal, const PipelineConfig &config) {
  config.Validate();
  if (signal.sample_rate != config.sample_rate)
    throw Error(ErrorCode::kSampleRateMismatch,
                "signal is " + std::to_string(signal.sample_rate) + " Hz, pipeline expects " +
                    std::to_string(config.sample_rate) + " Hz");
  const AudioSignal centered = RemoveDc(signal);
  const FrameMatrix framed = BlockFrames(centered, config.frame_len, config.frame_shift);
  const FrameMatrix voiced = RemoveSilence(framed, config.silence_fraction);
  if (voiced.num_frames() == 0) throw Error(ErrorCode::kAllSilent, "no frame exceeds the silence threshold");

  const FrameAnalyzer analyzer(config);
  FeatureSequence out;
  out.vectors = kernels::AnalyzeFrames(analyzer, voiced.frames);
  out.config_fingerprint = config.Fingerprint();
  return out;
}

void WriteFeatureDump(std::ostream &os, const FeatureSequence &features) {
  const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index t = 0; t < features.num_frames(); ++t) {
    for (Eigen::Index d = 0; d < features.dim(); ++d) {
      if (d) os << ',';
      os << features.vectors(t, d);
    }
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace spkid
