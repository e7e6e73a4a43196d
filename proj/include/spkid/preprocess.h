// include/spkid/preprocess.h

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

#ifndef SPKID_PREPROCESS_H_
#define SPKID_PREPROCESS_H_

#include <span>
#include <vector>

#include "spkid/audio_io.h"
#include "spkid/types.h"

namespace spkid {

// T x frame_len matrix of overlapping analysis frames, one frame per row.
struct FrameMatrix {
  Matrix frames;

  Eigen::Index num_frames() const { return frames.rows(); }
  Eigen::Index frame_len() const { return frames.cols(); }
  std::span<const double> frame(Eigen::Index t) const { return RowSpan(frames, t); }
};

// Subtracts the signal mean from every sample.
AudioSignal RemoveDc(const AudioSignal &signal);

// Root of the sum of squared samples.
double FrameEnergy(std::span<const double> frame);

// E_min + fraction * (E_max - E_min) over the given frame energies.
double SilenceThreshold(std::span<const double> energies, double fraction);

// Keeps frames whose energy is strictly above the silence threshold, in
// their original order. The result may have zero rows.
FrameMatrix RemoveSilence(const FrameMatrix &frames, double fraction);

// Frame t covers samples [t * shift, t * shift + frame_len). Trailing samples
// that do not fill a whole frame are dropped.
FrameMatrix BlockFrames(const AudioSignal &signal, int frame_len, int frame_shift);

// y(0) = x(0), y(n) = x(n) - coeff * x(n - 1).
std::vector<double> Preemphasize(std::span<const double> frame, double coeff);
void PreemphasizeInPlace(std::span<double> frame, double coeff);

// Symmetric Hamming window, 0.54 - 0.46 cos(2 pi n / (N - 1)).
std::vector<double> HammingWindow(int length);
std::vector<double> ApplyHamming(std::span<const double> frame);

}  // namespace spkid

#endif  // SPKID_PREPROCESS_H_
