// tests/subclust_test.cc

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

#include <algorithm>
#include <random>
#include <numeric>
#include <set>

#include "doctest.h"
#include "spkid/error.h"
#include "spkid/subclust.h"
#include "subclust_reference.h"
#include "test_util.h"

namespace spkid {
namespace {

std::vector<std::vector<double>> Rows(const Matrix &m) {
  std::vector<std::vector<double>> out(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) out[i].assign(m.row(i).data(), m.row(i).data() + m.cols());
  return out;
}

SubclustOptions Options(double radius) {
  SubclustOptions o;
  o.radius = radius;
  return o;
}

template <typename F>
ErrorCode CodeOf(F &&f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidConfig;
}

TEST_CASE("degenerate inputs give a single center") {
  Matrix same(20, 3);
  same.rowwise() = Eigen::RowVector3d(0.1, -2.0, 5.0);
  auto r = SubtractiveCluster(same, Options(0.5));
  REQUIRE(r.num_centers() == 1);
  CHECK(r.centers.row(0) == same.row(0));
  CHECK(r.indices[0] == 0);

  Matrix one(1, 2);
  one << 3.0, 4.0;
  r = SubtractiveCluster(one, Options(0.5));
  REQUIRE(r.num_centers() == 1);
  CHECK(r.centers.row(0) == one.row(0));
  CHECK(r.potentials[0] == 1.0);
}

TEST_CASE("matches the step-by-step reference") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const Matrix data = testing::RandomMatrix(rng, 5 + trial * 2, 1 + trial % 4, 0.0, 1.0);
    const double ra = 0.3 + 0.1 * (trial % 5);
    const auto r = SubtractiveCluster(data, Options(ra));
    const auto want = testing::ReferenceSubtractiveCluster(Rows(data), ra, 0.5, 0.15);
    REQUIRE(r.indices.size() == want.size());
    for (std::size_t k = 0; k < want.size(); ++k) CHECK(r.indices[k] == want[k]);
  }
}

TEST_CASE("three separated blobs give three centers") {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> noise(0.0, 0.1);
  const double means[3][2] = {{0, 0}, {10, 0}, {0, 10}};
  Matrix data(150, 2);
  for (int b = 0; b < 3; ++b)
    for (int i = 0; i < 50; ++i) data.row(b * 50 + i) << means[b][0] + noise(rng), means[b][1] + noise(rng);
  const auto r = SubtractiveCluster(data, Options(1.0));
  REQUIRE(r.num_centers() == 3);
  std::set<int> hit;
  for (Eigen::Index c = 0; c < 3; ++c)
    for (int b = 0; b < 3; ++b)
      if (std::hypot(r.centers(c, 0) - means[b][0], r.centers(c, 1) - means[b][1]) < 0.5) hit.insert(b);
  CHECK(hit.size() == 3);
}

TEST_CASE("result invariants on random data") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const Matrix data = testing::RandomMatrix(rng, 1 + trial * 3, 1 + trial % 5, 0.0, 1.0);
    SubclustOptions o = Options(0.2 + 0.05 * (trial % 8));
    const auto r = SubtractiveCluster(data, o);
    REQUIRE(r.num_centers() >= 1);
    CHECK(r.num_centers() <= data.rows());
    for (Eigen::Index c = 0; c < r.num_centers(); ++c) {
      CHECK(r.centers.row(c) == data.row(r.indices[c]));
      CHECK(r.potentials[c] > 0.0);
      CHECK(r.potentials[c] >= o.reject_ratio * r.potentials[0]);
      if (c > 0) CHECK(r.potentials[c] <= r.potentials[c - 1]);
    }
  }
}

TEST_CASE("translation moves centers without changing the selection") {
  std::mt19937_64 rng(24);
  std::uniform_int_distribution<int> grid(0, 16);
  for (int trial = 0; trial < 30; ++trial) {
    // Dyadic grid and integer offset keep every difference exact.
    Matrix data(30, 3);
    for (Eigen::Index i = 0; i < data.size(); ++i) data.data()[i] = grid(rng) / 16.0;
    const Eigen::RowVector3d shift(7.0, -3.0, 12.0);
    Matrix moved = data;
    moved.rowwise() += shift;
    const auto a = SubtractiveCluster(data, Options(0.4));
    const auto b = SubtractiveCluster(moved, Options(0.4));
    REQUIRE(a.indices == b.indices);
    Matrix expect = a.centers;
    expect.rowwise() += shift;
    CHECK(expect == b.centers);
  }
}

TEST_CASE("row permutation yields the same center set") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix data = testing::RandomMatrix(rng, 40, 2, 0.0, 1.0);
    std::vector<Eigen::Index> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix shuffled(40, 2);
    for (Eigen::Index i = 0; i < 40; ++i) shuffled.row(i) = data.row(perm[i]);
    const auto a = SubtractiveCluster(data, Options(0.35));
    const auto b = SubtractiveCluster(shuffled, Options(0.35));
    std::set<Eigen::Index> sa(a.indices.begin(), a.indices.end()), sb;
    for (auto i : b.indices) sb.insert(perm[i]);
    CHECK(sa == sb);
  }
}

TEST_CASE("precondition errors") {
  CHECK(CodeOf([] { SubtractiveCluster(Matrix(0, 2), Options(0.5)); }) == ErrorCode::kEmptyData);
  const Matrix m = Matrix::Ones(3, 2);
  CHECK(CodeOf([&] { SubtractiveCluster(m, Options(0.0)); }) == ErrorCode::kBadRadius);
  CHECK(CodeOf([&] { SubtractiveCluster(m, Options(-1.0)); }) == ErrorCode::kBadRadius);
  SubclustOptions bad = Options(0.5);
  bad.reject_ratio = 0.6;
  CHECK(CodeOf([&] { SubtractiveCluster(m, bad); }) == ErrorCode::kBadRatios);
  bad = Options(0.5);
  bad.accept_ratio = 1.5;
  CHECK(CodeOf([&] { SubtractiveCluster(m, bad); }) == ErrorCode::kBadRatios);
}

ClusterResult Centers(std::initializer_list<double> xs, double radius = 0.5) {
  ClusterResult r;
  r.radius = radius;
  r.centers.resize(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) r.centers(i++, 0) = x;
  return r;
}

TEST_CASE("EstimateWidths") {
  CHECK(EstimateWidths(Centers({2.0}, 0.7)) == std::vector<double>{0.7 * 0.7});
  CHECK(EstimateWidths(Centers({0.0, 1.5})) == std::vector<double>{2.25, 2.25});
  CHECK(EstimateWidths(Centers({0.0, 1.0, 3.0})) == std::vector<double>{1.0, 1.0, 4.0});
  CHECK(EstimateWidths(Centers({0.0, 1.0, 3.0}), 2.0) == std::vector<double>{4.0, 4.0, 16.0});

  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 30; ++trial) {
    ClusterResult r;
    r.radius = 0.5;
    r.centers = testing::RandomMatrix(rng, 2 + trial % 6, 3);
    const auto w = EstimateWidths(r);
    ClusterResult doubled = r;
    doubled.centers *= 2.0;
    const auto w2 = EstimateWidths(doubled);
    for (std::size_t i = 0; i < w.size(); ++i) {
      CHECK(w[i] > 0.0);
      CHECK(w2[i] == doctest::Approx(4.0 * w[i]).epsilon(1e-12));
    }
  }
}

}  // namespace
}  // namespace spkid
