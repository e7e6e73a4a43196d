// src/rbf.cc

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

#include "spkid/rbf.h"

#include <cmath>

#include "spkid/error.h"
#include "spkid/kernels.h"

namespace spkid {

void RbfNetwork::Validate() const {
  if (centers.rows() < 1) throw Error(ErrorCode::kEmptyData, "RBF network has no centers");
  if (widths.size() != static_cast<std::size_t>(centers.rows()))
    throw Error(ErrorCode::kDimensionMismatch, "one width per center required");
  for (double w : widths)
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorCode::kBadWidth, "widths must be positive");
  if (weights.rows() != centers.rows() || bias.size() != weights.cols())
    throw Error(ErrorCode::kDimensionMismatch, "output layer shape does not match centers");
  if (!weights.allFinite() || !bias.allFinite() || !centers.allFinite())
    throw Error(ErrorCode::kSolveFailure, "non-finite network parameters");
}

double GaussianKernel(std::span<const double> x, std::span<const double> center, double width) {
  if (x.size() != center.size())
    throw Error(ErrorCode::kDimensionMismatch, "input and center differ in dimension");
  if (!(width > 0.0)) throw Error(ErrorCode::kBadWidth, "kernel width must be positive");
  return std::exp(-SquaredDistance(x, center) / width);
}

Matrix DesignMatrix(const Matrix &data, const RbfNetwork &network) {
  return kernels::GaussianDesign(data, network.centers, network.widths);
}

std::vector<double> Forward(std::span<const double> x, const RbfNetwork &network) {
  if (x.size() != static_cast<std::size_t>(network.input_dim()))
    throw Error(ErrorCode::kDimensionMismatch, "input dimension differs from network");
  const Eigen::Index m = network.num_centers();
  Vector phi(m);
  for (Eigen::Index i = 0; i < m; ++i) phi(i) = GaussianKernel(x, RowSpan(network.centers, i), network.widths[i]);
  const Vector y = network.weights.transpose() * phi + network.bias;
  return {y.data(), y.data() + y.size()};
}

OutputLayer FitWeights(const Matrix &design, const Matrix &targets, double lambda) {
  if (design.rows() < 1) throw Error(ErrorCode::kEmptyData, "no training rows");
  if (design.cols() < 2) throw Error(ErrorCode::kDimensionMismatch, "design needs kernel and bias columns");
  if (targets.rows() != design.rows())
    throw Error(ErrorCode::kDimensionMismatch, "targets and design differ in row count");
  if (!(lambda >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "ridge lambda must be >= 0");
  if (!design.allFinite() || !targets.allFinite())
    throw Error(ErrorCode::kSolveFailure, "non-finite training data");

  const Eigen::Index m = design.cols() - 1;
  Eigen::MatrixXd theta;
  if (lambda > 0.0) {
    // Positive definite: |Phi v|^2 + lambda |v_w|^2 vanishes only for v = 0,
    // because the bias column is all ones.
    Eigen::MatrixXd normal = design.transpose() * design;
    normal.diagonal().head(m).array() += lambda;
    const Eigen::MatrixXd rhs = design.transpose() * targets;
    Eigen::LLT<Eigen::MatrixXd> llt(normal);
    if (llt.info() == Eigen::Success) {
      theta = llt.solve(rhs);
    } else {
      theta = Eigen::LDLT<Eigen::MatrixXd>(normal).solve(rhs);
    }
  } else {
    // Minimum-norm least squares, i.e. the pseudo-inverse solution; equals
    // the normal-equation solution whenever the design has full column rank.
    const Eigen::MatrixXd dense = design;
    theta = dense.completeOrthogonalDecomposition().solve(Eigen::MatrixXd(targets));
  }
  if (!theta.allFinite()) throw Error(ErrorCode::kSolveFailure, "least-squares solve produced non-finite weights");

  OutputLayer out;
  out.weights = theta.topRows(m);
  out.bias = theta.row(m).transpose();
  return out;
}

}  // namespace spkid
