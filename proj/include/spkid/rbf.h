// include/spkid/rbf.h

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

#ifndef SPKID_RBF_H_
#define SPKID_RBF_H_

#include <span>
#include <vector>

#include "spkid/types.h"

namespace spkid {

// Gaussian RBF network with a linear output layer:
//   y_c(x) = sum_i weights(i, c) * exp(-|x - center_i|^2 / width_i) + bias(c)
struct RbfNetwork {
  Matrix centers;              // M x D
  std::vector<double> widths;  // M
  Matrix weights;              // M x C
  Vector bias;                 // C

  Eigen::Index num_centers() const { return centers.rows(); }
  Eigen::Index input_dim() const { return centers.cols(); }
  Eigen::Index num_outputs() const { return weights.cols(); }

  // Throws on shape mismatch, non-positive widths or non-finite parameters.
  void Validate() const;
};

double GaussianKernel(std::span<const double> x, std::span<const double> center, double width);

// T x (M + 1): kernel responses plus a trailing column of ones.
Matrix DesignMatrix(const Matrix &data, const RbfNetwork &network);

std::vector<double> Forward(std::span<const double> x, const RbfNetwork &network);

struct OutputLayer {
  Matrix weights;  // M x C
  Vector bias;     // C
};

// Ridge least squares on the design matrix: minimizes
// |design * theta - targets|^2 + lambda * |weights|^2 (bias unpenalized).
// lambda == 0 uses the minimum-norm least-squares solution.
OutputLayer FitWeights(const Matrix &design, const Matrix &targets, double lambda);

}  // namespace spkid

#endif  // SPKID_RBF_H_
