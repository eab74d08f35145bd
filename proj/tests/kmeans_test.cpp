// Copyright 2026 The CGLRAM Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include <gtest/gtest.h>

#include "cglram/kmeans.hpp"
#include "testutil.hpp"

namespace cglram {
namespace {

MatrixStack scalars(std::initializer_list<double> values) {
  std::vector<Matrix> samples;
  for (double v : values) samples.push_back(Matrix::Constant(1, 1, v));
  return MatrixStack(std::move(samples));
}

MatrixStack blobs(std::mt19937_64& rng, std::size_t per, std::vector<Label>& truth) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Matrix> samples;
  for (std::size_t i = 0; i < 2 * per; ++i) {
    const Label label = static_cast<Label>(i % 2);
    Matrix A = Matrix::Constant(3, 3, label == 0 ? 0.0 : 10.0 / 3.0);
    for (Index e = 0; e < A.size(); ++e) A.data()[e] += 0.1 * g(rng);
    samples.push_back(A);
    truth.push_back(label);
  }
  return MatrixStack(std::move(samples));
}

// Three independent sums against the clustering's own means.
void expect_decomposition(const MatrixStack& stack, const std::vector<std::size_t>& assignment) {
  const std::size_t K = *std::max_element(assignment.begin(), assignment.end()) + 1;
  const Index d = stack.rows() * stack.cols();
  std::vector<Vector> sums(K, Vector::Zero(d));
  std::vector<double> counts(K, 0.0);
  Vector total = Vector::Zero(d);
  for (std::size_t i = 0; i < stack.size(); ++i) {
    Vector x = Eigen::Map<const Vector>(stack[i].data(), d);
    sums[assignment[i]] += x;
    counts[assignment[i]] += 1.0;
    total += x;
  }
  total /= static_cast<double>(stack.size());
  double sst = 0.0, sse = 0.0, ssb = 0.0;
  for (std::size_t i = 0; i < stack.size(); ++i) {
    Vector x = Eigen::Map<const Vector>(stack[i].data(), d);
    sst += (x - total).squaredNorm();
    sse += (x - sums[assignment[i]] / counts[assignment[i]]).squaredNorm();
  }
  for (std::size_t j = 0; j < K; ++j) {
    if (counts[j] > 0) ssb += counts[j] * (sums[j] / counts[j] - total).squaredNorm();
  }
  const auto dec = variance_decomposition(stack, assignment);
  EXPECT_NEAR(dec.sst, sst, 1e-10 * sst);
  EXPECT_NEAR(dec.sse, sse, 1e-10 * std::max(sse, 1.0));
  EXPECT_NEAR(dec.ssb, ssb, 1e-10 * std::max(ssb, 1.0));
  EXPECT_LT(std::abs(dec.sst - dec.sse - dec.ssb) / dec.sst, 1e-10);
}

TEST(Vectorize, ColumnMajor) {
  Matrix A(2, 3);
  A << 1, 2, 3, 4, 5, 6;
  Vector v = vectorize(A);
  Vector expected(6);
  expected << 1, 4, 2, 5, 3, 6;
  EXPECT_TRUE(v == expected);
}

TEST(SeededDistinct, DistinctAndDeterministic) {
  auto a = seeded_distinct(20, 7, 3);
  auto b = seeded_distinct(20, 7, 3);
  EXPECT_EQ(a, b);
  std::sort(a.begin(), a.end());
  EXPECT_EQ(std::unique(a.begin(), a.end()), a.end());
  EXPECT_LT(a.back(), 20u);
}

TEST(Kmeans, FourPointFixture) {
  auto stack = scalars({0, 1, 10, 11});
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto fit = kmeans_fit(stack, 2, seed);
    EXPECT_EQ(fit.assignment[0], fit.assignment[1]);
    EXPECT_EQ(fit.assignment[2], fit.assignment[3]);
    EXPECT_NE(fit.assignment[0], fit.assignment[2]);
    EXPECT_NEAR(fit.centroids[fit.assignment[0]][0], 0.5, 1e-12);
    EXPECT_NEAR(fit.centroids[fit.assignment[2]][0], 10.5, 1e-12);
    EXPECT_NEAR(fit.sse_history.back(), 1.0, 1e-12);
    auto dec = variance_decomposition(stack, fit);
    EXPECT_NEAR(dec.sse, 1.0, 1e-12);
    EXPECT_NEAR(dec.ssb, 100.0, 1e-12);
    EXPECT_NEAR(dec.sst, 101.0, 1e-12);
  }
}

TEST(Kmeans, SingleClusterHasNoBetweenTerm) {
  auto stack = scalars({0, 1, 10, 11});
  auto dec = variance_decomposition(stack, std::vector<std::size_t>(4, 0));
  EXPECT_EQ(dec.ssb, 0.0);
  EXPECT_DOUBLE_EQ(dec.sst, dec.sse);
}

TEST(Kmeans, KEqualsN) {
  std::mt19937_64 rng(2);
  auto stack = testutil::random_stack(rng, 6, 3, 2);
  auto fit = kmeans_fit(stack, 6, 4);
  std::vector<std::size_t> sorted = fit.assignment;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_NEAR(fit.sse_history.back(), 0.0, 1e-12);
}

TEST(Kmeans, RecoversSeparatedBlobs) {
  std::mt19937_64 rng(10);
  std::vector<Label> truth;
  auto stack = blobs(rng, 25, truth);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto fit = kmeans_fit(stack, 2, seed);
    EXPECT_EQ(oracle::label_agreement(fit.assignment, truth), 1.0);
  }
}

TEST(Kmeans, RandomDataProperties) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 40)(rng);
    const std::size_t K = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(n, 6))(rng);
    auto stack = testutil::random_stack(rng, n, 3, 4);
    auto fit = kmeans_fit(stack, K, static_cast<std::uint64_t>(trial));

    ASSERT_EQ(fit.assignment.size(), n);
    for (auto a : fit.assignment) EXPECT_LT(a, K);
    EXPECT_TRUE(testutil::non_increasing(fit.sse_history, 1e-9));
    expect_decomposition(stack, fit.assignment);

    // Centroids are the arithmetic means of their members.
    for (std::size_t j = 0; j < K; ++j) {
      Vector mean = Vector::Zero(12);
      double count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (fit.assignment[i] == j) {
          mean += vectorize(stack[i]);
          count += 1;
        }
      }
      ASSERT_GT(count, 0) << "empty cluster " << j;
      EXPECT_LT((mean / count - fit.centroids[j]).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Kmeans, MeanMinimizesClusterScatter) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vector> points;
    for (int i = 0; i < 8; ++i) points.push_back(oracle::gaussian(rng, 5, 1).col(0));
    Vector mu = Vector::Zero(5);
    for (const auto& p : points) mu += p;
    mu /= 8.0;
    Vector x = mu + 0.3 * oracle::gaussian(rng, 5, 1).col(0);
    double at_mu = 0.0, at_x = 0.0;
    for (const auto& p : points) {
      at_mu += (p - mu).squaredNorm();
      at_x += (p - x).squaredNorm();
    }
    EXPECT_GE(at_x, at_mu);
  }
}

TEST(Kmeans, EmptyClusterRepairKeepsPartitionTotal) {
  // Duplicate points force ties; every cluster must stay non-empty.
  auto stack = scalars({1, 1, 1, 1, 5, 5});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto fit = kmeans_fit(stack, 3, seed);
    std::vector<int> counts(3, 0);
    for (auto a : fit.assignment) ++counts[a];
    for (int c : counts) EXPECT_GT(c, 0);
  }
}

TEST(Kmeans, Errors) {
  auto stack = scalars({0, 1});
  EXPECT_THROW(kmeans_fit(stack, 3, 0), Error);
  EXPECT_THROW(kmeans_fit(stack, 0, 0), Error);
  EXPECT_THROW(variance_decomposition(stack, std::vector<std::size_t>{0}), Error);
}

}  // namespace
}  // namespace cglram
