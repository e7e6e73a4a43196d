// src/subclust.cc

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

#include "spkid/subclust.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spkid/error.h"
#include "spkid/kernels.h"

namespace spkid {

ClusterResult SubtractiveCluster(const Matrix &data, const SubclustOptions &options) {
  if (data.rows() == 0 || data.cols() == 0) throw Error(ErrorCode::kEmptyData, "no data to cluster");
  if (!(options.radius > 0.0) || !std::isfinite(options.radius))
    throw Error(ErrorCode::kBadRadius, "cluster radius must be positive and finite");
  if (!(options.reject_ratio > 0.0 && options.reject_ratio < options.accept_ratio &&
        options.accept_ratio <= 1.0))
    throw Error(ErrorCode::kBadRatios, "need 0 < reject_ratio < accept_ratio <= 1");
  if (!(options.squash_factor > 0.0)) throw Error(ErrorCode::kBadRadius, "squash factor must be positive");

  const double ra = options.radius;
  const double rb = options.squash_factor * ra;
  const double alpha = 4.0 / (ra * ra);
  const double beta = 4.0 / (rb * rb);
  const Eigen::Index n = data.rows();

  Vector potential = kernels::InitialPotentials(data, alpha);

  ClusterResult result;
  result.radius = ra;
  double first = 0.0;
  while (static_cast<Eigen::Index>(result.indices.size()) < n) {
    Eigen::Index k = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (potential(i) > potential(k)) k = i;
    const double peak = potential(k);

    if (result.indices.empty()) {
      first = peak;
    } else if (peak > options.accept_ratio * first) {
      // accepted outright
    } else if (peak < options.reject_ratio * first) {
      break;
    } else {
      double nearest = std::numeric_limits<double>::infinity();
      for (Eigen::Index c : result.indices)
        nearest = std::min(nearest, SquaredDistance(RowSpan(data, k), RowSpan(data, c)));
      if (std::sqrt(nearest) / ra + peak / first < 1.0) {
        potential(k) = 0.0;
        continue;
      }
    }

    result.indices.push_back(k);
    result.potentials.push_back(peak);
    const auto center = RowSpan(data, k);
    for (Eigen::Index i = 0; i < n; ++i)
      potential(i) -= peak * std::exp(-beta * SquaredDistance(RowSpan(data, i), center));
  }

  result.centers.resize(static_cast<Eigen::Index>(result.indices.size()), data.cols());
  for (std::size_t c = 0; c < result.indices.size(); ++c)
    result.centers.row(static_cast<Eigen::Index>(c)) = data.row(result.indices[c]);
  return result;
}

std::vector<double> EstimateWidths(const ClusterResult &result, double spread) {
  const Eigen::Index k = result.num_centers();
  if (k == 0) throw Error(ErrorCode::kEmptyData, "no centers");
  const double fallback = result.radius * result.radius;
  std::vector<double> widths(k, fallback);
  if (k == 1) return widths;
  for (Eigen::Index i = 0; i < k; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < k; ++j)
      if (j != i) nearest = std::min(nearest, SquaredDistance(RowSpan(result.centers, i), RowSpan(result.centers, j)));
    // Coincident centers cannot come out of the clustering, but a caller may
    // hand-build one.
    if (nearest > 0.0) widths[i] = spread * spread * nearest;
  }
  return widths;
}

}  // namespace spkid
