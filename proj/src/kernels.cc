// src/kernels.cc

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

#include "spkid/kernels.h"

#include <cmath>
#include <exception>
#include <limits>

#include "spkid/error.h"
#include "spkid/features.h"

namespace spkid::kernels {

namespace {

double PotentialOf(const Matrix &data, Eigen::Index i, double alpha) {
  const auto xi = RowSpan(data, i);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < data.rows(); ++j) sum += std::exp(-alpha * SquaredDistance(xi, RowSpan(data, j)));
  return sum;
}

void DesignRow(const Matrix &data, const Matrix &centers, std::span<const double> widths,
               Eigen::Index t, Matrix &out) {
  const auto x = RowSpan(data, t);
  for (Eigen::Index i = 0; i < centers.rows(); ++i)
    out(t, i) = std::exp(-SquaredDistance(x, RowSpan(centers, i)) / widths[i]);
  out(t, centers.rows()) = 1.0;
}

double NearestDistance(const Matrix &data, const Matrix &centers, Eigen::Index t) {
  const auto x = RowSpan(data, t);
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < centers.rows(); ++i) best = std::min(best, SquaredDistance(x, RowSpan(centers, i)));
  return std::sqrt(best);
}

}  // namespace

Vector InitialPotentials(const Matrix &data, double alpha, Exec exec) {
  const Eigen::Index n = data.rows();
  Vector p(n);
  if (exec == Exec::kSerial) {
    for (Eigen::Index i = 0; i < n; ++i) p(i) = PotentialOf(data, i, alpha);
  } else {
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) p(i) = PotentialOf(data, i, alpha);
  }
  return p;
}

Matrix GaussianDesign(const Matrix &data, const Matrix &centers, std::span<const double> widths,
                      Exec exec) {
  if (data.cols() != centers.cols())
    throw Error(ErrorCode::kDimensionMismatch, "data and centers differ in dimension");
  if (widths.size() != static_cast<std::size_t>(centers.rows()))
    throw Error(ErrorCode::kDimensionMismatch, "one width per center required");
  Matrix out(data.rows(), centers.rows() + 1);
  const Eigen::Index n = data.rows();
  if (exec == Exec::kSerial) {
    for (Eigen::Index t = 0; t < n; ++t) DesignRow(data, centers, widths, t, out);
  } else {
#pragma omp parallel for schedule(static)
    for (Eigen::Index t = 0; t < n; ++t) DesignRow(data, centers, widths, t, out);
  }
  return out;
}

std::vector<double> NearestCenterDistances(const Matrix &data, const Matrix &centers, Exec exec) {
  if (data.cols() != centers.cols())
    throw Error(ErrorCode::kDimensionMismatch, "data and centers differ in dimension");
  if (centers.rows() == 0) throw Error(ErrorCode::kEmptyData, "no centers");
  const Eigen::Index n = data.rows();
  std::vector<double> out(n);
  if (exec == Exec::kSerial) {
    for (Eigen::Index t = 0; t < n; ++t) out[t] = NearestDistance(data, centers, t);
  } else {
#pragma omp parallel for schedule(static)
    for (Eigen::Index t = 0; t < n; ++t) out[t] = NearestDistance(data, centers, t);
  }
  return out;
}

Matrix AnalyzeFrames(const FrameAnalyzer &analyzer, const Matrix &frames, Exec exec) {
  const Eigen::Index n = frames.rows();
  Matrix out(n, analyzer.config().cepstral_count);
  if (exec == Exec::kSerial) {
    for (Eigen::Index t = 0; t < n; ++t) analyzer.Analyze(RowSpan(frames, t), RowSpan(out, t));
    return out;
  }
  // Exceptions must not escape an OpenMP region; rethrow the first one after.
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (Eigen::Index t = 0; t < n; ++t) {
    try {
      analyzer.Analyze(RowSpan(frames, t), RowSpan(out, t));
    } catch (...) {
#pragma omp critical(spkid_analyze_frames)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace spkid::kernels
