// include/spkid/subclust.h

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

#ifndef SPKID_SUBCLUST_H_
#define SPKID_SUBCLUST_H_

#include <vector>

#include "spkid/types.h"

namespace spkid {

struct ClusterResult {
  Matrix centers;                // K x D, each an input row
  std::vector<double> potentials;  // potential of each center when selected
  std::vector<Eigen::Index> indices;  // row of the input each center came from
  double radius = 0.0;

  Eigen::Index num_centers() const { return centers.rows(); }
};

struct SubclustOptions {
  double radius = 0.5;        // r_a, neighborhood radius
  double accept_ratio = 0.5;  // above this fraction of the first potential: accept
  double reject_ratio = 0.15;  // below it: stop
  double squash_factor = 1.5;  // r_b = squash_factor * r_a
};

// Subtractive clustering. The number of centers is not fixed in advance:
// points are promoted to centers in order of decreasing potential until the
// remaining potential falls below reject_ratio of the first. Ties go to the
// lowest row index.
ClusterResult SubtractiveCluster(const Matrix &data, const SubclustOptions &options);

// Kernel width for each center: (spread * distance to nearest other center)^2,
// or radius^2 when there is a single center.
std::vector<double> EstimateWidths(const ClusterResult &result, double spread = 1.0);

}  // namespace spkid

#endif  // SPKID_SUBCLUST_H_
