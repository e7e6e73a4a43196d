// src/preprocess.cc

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

#include "spkid/preprocess.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "spkid/error.h"

namespace spkid {

AudioSignal RemoveDc(const AudioSignal &signal) {
  if (signal.samples.empty()) throw Error(ErrorCode::kEmptyAudio, "cannot remove DC from empty signal");
  const double mean = std::accumulate(signal.samples.begin(), signal.samples.end(), 0.0) /
                      static_cast<double>(signal.samples.size());
  AudioSignal out = signal;
  for (double &x : out.samples) x -= mean;
  return out;
}

double FrameEnergy(std::span<const double> frame) {
  if (frame.empty()) throw Error(ErrorCode::kEmptyFrame, "energy of empty frame");
  double sum = 0.0;
  for (double x : frame) sum += x * x;
  return std::sqrt(sum);
}

double SilenceThreshold(std::span<const double> energies, double fraction) {
  if (energies.empty()) throw Error(ErrorCode::kEmptySequence, "no frame energies");
  const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
  return *lo + fraction * (*hi - *lo);
}

FrameMatrix RemoveSilence(const FrameMatrix &frames, double fraction) {
  const Eigen::Index n = frames.num_frames();
  if (n == 0) throw Error(ErrorCode::kEmptySequence, "no frames to threshold");
  std::vector<double> energies(n);
  for (Eigen::Index t = 0; t < n; ++t) energies[t] = FrameEnergy(frames.frame(t));
  const double threshold = SilenceThreshold(energies, fraction);

  std::vector<Eigen::Index> keep;
  for (Eigen::Index t = 0; t < n; ++t)
    if (energies[t] > threshold) keep.push_back(t);

  FrameMatrix out;
  out.frames.resize(static_cast<Eigen::Index>(keep.size()), frames.frame_len());
  for (std::size_t k = 0; k < keep.size(); ++k)
    out.frames.row(static_cast<Eigen::Index>(k)) = frames.frames.row(keep[k]);
  return out;
}

FrameMatrix BlockFrames(const AudioSignal &signal, int frame_len, int frame_shift) {
  if (frame_len < 1 || frame_shift < 1 || frame_shift > frame_len)
    throw Error(ErrorCode::kInvalidConfig, "need 1 <= frame_shift <= frame_len");
  const auto len = static_cast<Eigen::Index>(signal.samples.size());
  if (len < frame_len)
    throw Error(ErrorCode::kSignalTooShort, std::to_string(len) + " samples is shorter than one frame (" +
                                                std::to_string(frame_len) + ")");
  const Eigen::Index count = (len - frame_len) / frame_shift + 1;
  FrameMatrix out;
  out.frames.resize(count, frame_len);
  for (Eigen::Index t = 0; t < count; ++t) {
    const double *src = signal.samples.data() + t * frame_shift;
    std::copy(src, src + frame_len, out.frames.row(t).data());
  }
  return out;
}

void PreemphasizeInPlace(std::span<double> frame, double coeff) {
  if (frame.empty()) throw Error(ErrorCode::kEmptyFrame, "pre-emphasis of empty frame");
  // Walk backwards so x(n - 1) is still unfiltered when used.
  for (std::size_t n = frame.size() - 1; n > 0; --n) frame[n] -= coeff * frame[n - 1];
}

std::vector<double> Preemphasize(std::span<const double> frame, double coeff) {
  std::vector<double> out(frame.begin(), frame.end());
  PreemphasizeInPlace(out, coeff);
  return out;
}

std::vector<double> HammingWindow(int length) {
  if (length < 2) throw Error(ErrorCode::kFrameTooShort, "Hamming window needs at least 2 samples");
  std::vector<double> w(length);
  const double denom = static_cast<double>(length - 1);
  for (int n = 0; n < length; ++n)
    w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / denom);
  return w;
}

std::vector<double> ApplyHamming(std::span<const double> frame) {
  const auto w = HammingWindow(static_cast<int>(frame.size()));
  std::vector<double> out(frame.size());
  for (std::size_t n = 0; n < frame.size(); ++n) out[n] = frame[n] * w[n];
  return out;
}

}  // namespace spkid
