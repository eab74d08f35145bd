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

#include "cglram.hpp"
#include "testutil.hpp"

namespace cglram {
namespace {

struct Generated {
  MatrixStack stack;
  std::vector<ProjectorPair> pairs;
  std::vector<Label> labels;
};

Generated generate(std::mt19937_64& rng, std::size_t K, std::size_t per, Index dim, Index k,
                   double noise) {
  Generated out;
  std::vector<Matrix> samples;
  for (std::size_t j = 0; j < K; ++j) out.pairs.push_back(testutil::random_pair(rng, dim, dim, k));
  for (std::size_t i = 0; i < K * per; ++i) {
    const std::size_t j = i % K;
    Matrix A = out.pairs[j].left * oracle::gaussian(rng, k, k) * out.pairs[j].right.transpose() +
               oracle::gaussian(rng, dim, dim, noise);
    samples.push_back(A);
    out.labels.push_back(static_cast<Label>(j));
  }
  out.stack = MatrixStack(std::move(samples));
  return out;
}

TEST(GeneralizedDistance, Examples) {
  std::mt19937_64 rng(1);
  auto pair = testutil::random_pair(rng, 6, 5, 2);
  Matrix inside = pair.left * oracle::gaussian(rng, 2, 2) * pair.right.transpose();
  EXPECT_NEAR(generalized_distance_sq(inside, pair), 0.0, 1e-10);

  ProjectorPair axes{Matrix::Identity(6, 2), Matrix::Identity(5, 2)};
  Matrix outside = Matrix::Zero(6, 5);
  outside.bottomRows(4) = oracle::gaussian(rng, 4, 5);
  EXPECT_NEAR(generalized_distance_sq(outside, axes), outside.squaredNorm(), 1e-12);
}

TEST(GeneralizedDistance, ProjectionIdentity) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const Index r = std::uniform_int_distribution<Index>(2, 12)(rng);
    const Index c = std::uniform_int_distribution<Index>(2, 12)(rng);
    const Index k = std::uniform_int_distribution<Index>(1, std::min(r, c))(rng);
    Matrix A = oracle::gaussian(rng, r, c);
    auto pair = testutil::random_pair(rng, r, c, k);
    const double d = generalized_distance_sq(A, pair);
    const Matrix M = oracle::middle_loops(A, pair.left, pair.right);
    const double explicit_form = oracle::residual_sq_loops(A, pair.left, M, pair.right);
    const double identity_form = A.squaredNorm() - M.squaredNorm();
    EXPECT_LT(std::abs(d - explicit_form) / A.squaredNorm(), 1e-8);
    EXPECT_LT(std::abs(d - identity_form) / A.squaredNorm(), 1e-8);
  }
}

TEST(AssignClusters, ZeroDistanceWins) {
  std::mt19937_64 rng(3);
  std::vector<ProjectorPair> centroids;
  for (int j = 0; j < 3; ++j) centroids.push_back(testutil::random_pair(rng, 8, 8, 2));
  Matrix A = centroids[2].left * oracle::gaussian(rng, 2, 2) * centroids[2].right.transpose();
  EXPECT_EQ(assign_clusters(MatrixStack({A}), centroids), std::vector<std::size_t>{2});
}

TEST(AssignClusters, TiesGoToLowestIndex) {
  std::mt19937_64 rng(4);
  auto pair = testutil::random_pair(rng, 5, 5, 2);
  auto other = testutil::random_pair(rng, 5, 5, 2);
  auto stack = testutil::random_stack(rng, 12, 5, 5);
  auto a = assign_clusters(stack, {pair, pair});
  EXPECT_EQ(a, std::vector<std::size_t>(12, 0));
  auto b = assign_clusters(stack, {other, pair, pair});
  for (auto j : b) EXPECT_NE(j, 2u);
}

TEST(AssignClusters, MatchesDistanceTable) {
  std::mt19937_64 rng(5);
  auto gen = generate(rng, 3, 10, 12, 2, 0.01);
  auto assignment = assign_clusters(gen.stack, gen.pairs);
  for (std::size_t i = 0; i < gen.stack.size(); ++i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < 3; ++j) {
      const auto& p = gen.pairs[j];
      const double d = oracle::residual_sq_loops(
          gen.stack[i], p.left, oracle::middle_loops(gen.stack[i], p.left, p.right), p.right);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    EXPECT_EQ(assignment[i], best);
    EXPECT_EQ(assignment[i], static_cast<std::size_t>(gen.labels[i]));
  }
}

TEST(Wcssre, BruteForce) {
  std::mt19937_64 rng(6);
  auto stack = testutil::random_stack(rng, 9, 5, 4);
  ClusterModel model;
  model.K = 3;
  model.k = 2;
  for (int j = 0; j < 3; ++j) model.centroids.push_back(testutil::random_pair(rng, 5, 4, 2));
  double brute = 0.0;
  for (std::size_t i = 0; i < 9; ++i) {
    model.assignment.push_back(i % 3);
    model.middles.push_back(oracle::gaussian(rng, 2, 2));
    const auto& p = model.centroids[i % 3];
    brute += oracle::residual_sq_loops(stack[i], p.left, model.middles[i], p.right);
  }
  EXPECT_NEAR(wcssre(stack, model), brute, 1e-10 * brute);
  model.assignment[0] = 5;
  EXPECT_THROW(wcssre(stack, model), Error);
}

TEST(Cglram, SingleClusterIsGlram) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    auto stack = testutil::random_stack(rng, 12, 7, 6);
    CglramConfig cfg;
    cfg.K = 1;
    cfg.k = 3;
    cfg.seed = static_cast<std::uint64_t>(trial);
    auto model = cglram_fit(stack, cfg);
    auto fit = glram_fit(stack, 3, cfg.inner);
    const double expected = fit.final_rmsre() * fit.final_rmsre() * 12.0;
    EXPECT_LT(std::abs(model.wcssre() - expected) / model.wcssre(), 1e-8);
    EXPECT_LT(std::abs(wcssre(stack, model) - expected) / expected, 1e-10);
    EXPECT_EQ(model.stop_reason, StopReason::FixedPoint);
  }
}

TEST(Cglram, SingletonClustersMatchTsvd) {
  std::mt19937_64 rng(8);
  auto stack = testutil::random_stack(rng, 6, 6, 5);
  CglramConfig cfg;
  cfg.K = 6;
  cfg.k = 2;
  cfg.inner = {1000, 1e-14};
  auto model = cglram_fit(stack, cfg);
  double tsvd = 0.0;
  for (const auto& A : stack.samples()) tsvd += std::pow(tsvd_error(A, 2), 2);
  EXPECT_LT(std::abs(model.wcssre() - tsvd) / tsvd, 1e-6);
}

TEST(Cglram, RecoversTwoNoiselessClusters) {
  SynthSpec spec;
  spec.K_true = 2;
  spec.per_cluster = {10, 10};
  spec.rows = spec.cols = 20;
  spec.k_true = 3;
  spec.noise_sigma = 0.0;
  spec.seed = 3;
  auto stack = synth_generate(spec);
  CglramConfig cfg;
  cfg.K = 2;
  cfg.k = 3;
  double best = std::numeric_limits<double>::infinity();
  double agreement = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    auto model = cglram_fit(stack, cfg);
    if (model.wcssre() < best) {
      best = model.wcssre();
      agreement = oracle::label_agreement(model.assignment, *stack.labels());
    }
  }
  EXPECT_LT(best, 1e-8);
  EXPECT_EQ(agreement, 1.0);
}

TEST(Cglram, OuterLoopProperties) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t K = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    auto gen = generate(rng, K, 8, 10, 2, 0.3);
    CglramConfig cfg;
    cfg.K = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    cfg.k = std::uniform_int_distribution<Index>(1, 4)(rng);
    cfg.seed = static_cast<std::uint64_t>(trial);
    cfg.eta = trial % 2 ? 1e-4 : 1e-9;
    cfg.max_outer = 20;
    cfg.init = trial % 3 == 0 ? CentroidInit::SampleSeeds : CentroidInit::RandomPartition;
    auto model = cglram_fit(gen.stack, cfg);

    EXPECT_TRUE(testutil::non_increasing(model.wcssre_history, 1e-9));
    EXPECT_LE(model.outer_iterations, cfg.max_outer);
    EXPECT_TRUE(model.converged || model.stop_reason == StopReason::MaxOuter);
    // Frozen-centroid reassignment never raises the objective.
    for (std::size_t t = 0; t < model.reassigned_history.size(); ++t) {
      EXPECT_LE(model.reassigned_history[t], model.wcssre_history[t] * (1 + 1e-12));
    }
    ASSERT_EQ(model.assignment.size(), gen.stack.size());
    std::vector<int> counts(cfg.K, 0);
    for (auto a : model.assignment) ++counts[a];
    for (int c : counts) EXPECT_GT(c, 0);
    for (const auto& p : model.centroids) {
      EXPECT_LT(orthonormality_defect(p.left), 1e-10);
      EXPECT_LT(orthonormality_defect(p.right), 1e-10);
    }
    EXPECT_LT(std::abs(wcssre(gen.stack, model) - model.wcssre()), 1e-10 * model.wcssre());
  }
}

TEST(Cglram, CentroidsAreLocallyOptimal) {
  std::mt19937_64 rng(10);
  auto gen = generate(rng, 3, 10, 10, 2, 0.2);
  CglramConfig cfg;
  cfg.K = 3;
  cfg.k = 2;
  cfg.eta = 1e-12;
  cfg.max_outer = 100;
  auto model = cglram_fit(gen.stack, cfg);
  const auto groups = detail::members_of(model.assignment, model.K);
  for (std::size_t j = 0; j < model.K; ++j) {
    double before = 0.0;
    for (auto i : groups[j]) before += generalized_distance_sq(gen.stack[i], model.centroids[j]);
    auto fit = glram_refit(gen.stack, groups[j], model.centroids[j], cfg.inner);
    const double after = fit.final_rmsre() * fit.final_rmsre() * static_cast<double>(groups[j].size());
    EXPECT_LT((before - after) / before, cfg.inner.rel_tol);
  }
}

TEST(Cglram, WarmStartNeverExceedsStartingPartition) {
  std::mt19937_64 rng(11);
  auto gen = generate(rng, 3, 10, 10, 2, 0.1);
  auto glram = glram_fit(gen.stack, 2);
  const double glram_err = glram.final_rmsre() * glram.final_rmsre() * 30.0;
  CglramConfig cfg;
  cfg.K = 3;
  cfg.k = 2;
  auto kmeans = kmeans_fit(gen.stack, 3, 0);
  auto model = cglram_fit_from(gen.stack, cfg, kmeans.assignment,
                               std::vector<ProjectorPair>(3, glram.pair()));
  EXPECT_LE(model.initial_wcssre(), glram_err + 1e-6);
  EXPECT_LE(model.wcssre(), glram_err + 1e-6);
}

TEST(Cglram, Deterministic) {
  std::mt19937_64 rng(12);
  auto gen = generate(rng, 2, 8, 8, 2, 0.1);
  CglramConfig cfg;
  cfg.K = 2;
  cfg.k = 2;
  cfg.seed = 5;
  auto a = cglram_fit(gen.stack, cfg);
  auto b = cglram_fit(gen.stack, cfg);
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.wcssre_history, b.wcssre_history);
}

TEST(Cglram, Errors) {
  std::mt19937_64 rng(13);
  auto stack = testutil::random_stack(rng, 3, 4, 4);
  CglramConfig cfg;
  cfg.K = 4;
  EXPECT_THROW(cglram_fit(stack, cfg), Error);
  cfg.K = 2;
  cfg.k = 5;
  EXPECT_THROW(cglram_fit(stack, cfg), Error);
  cfg.k = 1;
  cfg.eta = 0.0;
  EXPECT_THROW(cglram_fit(stack, cfg), Error);
}

}  // namespace
}  // namespace cglram
