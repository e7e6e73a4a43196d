// include/spkid/kernels.h

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

#ifndef SPKID_KERNELS_H_
#define SPKID_KERNELS_H_

#include <span>
#include <vector>

#include "spkid/types.h"

namespace spkid {

class FrameAnalyzer;

// Data-parallel inner loops of the pipeline. Each kernel has a serial
// reference and an OpenMP version; both produce bit-identical results since
// every output element is computed by the same sequence of operations.
namespace kernels {

enum class Exec { kSerial, kParallel };

// potential(i) = sum_j exp(-alpha * |x_i - x_j|^2)
Vector InitialPotentials(const Matrix &data, double alpha, Exec exec = Exec::kParallel);

// Entry (t, i) = exp(-|x_t - c_i|^2 / widths(i)); last column is all ones.
Matrix GaussianDesign(const Matrix &data, const Matrix &centers, std::span<const double> widths,
                      Exec exec = Exec::kParallel);

// Distance from each row of data to its nearest center.
std::vector<double> NearestCenterDistances(const Matrix &data, const Matrix &centers,
                                           Exec exec = Exec::kParallel);

// Runs analyzer over the given frame rows, one output row per frame.
Matrix AnalyzeFrames(const FrameAnalyzer &analyzer, const Matrix &frames,
                     Exec exec = Exec::kParallel);

}  // namespace kernels
}  // namespace spkid

#endif  // SPKID_KERNELS_H_
