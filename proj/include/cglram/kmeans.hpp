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

#pragma once

// Lloyd's K-means on vectorized samples (columns concatenated).

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "cglram/glram.hpp"
#include "cglram/stack.hpp"

namespace cglram {

struct VClustering {
  std::size_t K = 0;
  std::vector<Vector> centroids;        // length r*c each
  std::vector<std::size_t> assignment;  // cluster index per sample
  std::vector<double> sse_history;
  int iterations = 0;
  bool converged = false;
};

struct VarianceDecomposition {
  double sst = 0.0;
  double sse = 0.0;
  double ssb = 0.0;
};

/// Column-major concatenation of A's columns.
inline Vector vectorize(const Matrix& A) {
  Vector v(A.size());
  Index pos = 0;
  for (Index j = 0; j < A.cols(); ++j)
    for (Index i = 0; i < A.rows(); ++i) v[pos++] = A(i, j);
  return v;
}

/// Seeded choice of `count` distinct indices out of [0, n), in draw order.
inline std::vector<std::size_t> seeded_distinct(std::size_t n, std::size_t count,
                                                std::uint64_t seed) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates with an explicit modulus draw so the sequence
  // does not depend on the standard library's distribution internals.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

namespace detail {

inline std::size_t nearest_centroid(const Vector& x, const std::vector<Vector>& centroids,
                                    double* distance_sq = nullptr) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < centroids.size(); ++j) {
    const double d = (x - centroids[j]).squaredNorm();
    if (d < best_d) {  // strict: ties stay with the lower index
      best_d = d;
      best = j;
    }
  }
  if (distance_sq) *distance_sq = best_d;
  return best;
}

inline std::vector<Vector> cluster_means(const std::vector<Vector>& points,
                                         const std::vector<std::size_t>& assignment,
                                         std::size_t K) {
  const Index d = points.front().size();
  std::vector<Vector> sums(K, Vector::Zero(d));
  std::vector<std::size_t> counts(K, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    sums[assignment[i]] += points[i];
    ++counts[assignment[i]];
  }
  for (std::size_t j = 0; j < K; ++j) {
    if (counts[j] > 0) sums[j] /= static_cast<double>(counts[j]);
  }
  return sums;
}

}  // namespace detail

/// Lloyd iteration from K seeded sample centroids. Stops when the
/// assignment repeats or after cfg.max_iters rounds. An emptied cluster
/// takes the sample farthest from its current centroid.
inline VClustering kmeans_fit(const MatrixStack& stack, std::size_t K, std::uint64_t seed,
                              const IterationConfig& cfg = {}) {
  require_nonempty(stack);
  require(K >= 1 && K <= stack.size(), ErrorCode::TooManyClusters,
          "K=" + std::to_string(K) + " with N=" + std::to_string(stack.size()));
  require_valid(cfg);

  const std::size_t n = stack.size();
  std::vector<Vector> points;
  points.reserve(n);
  for (const auto& A : stack.samples()) points.push_back(vectorize(A));

  VClustering out;
  out.K = K;
  for (std::size_t idx : seeded_distinct(n, K, seed)) out.centroids.push_back(points[idx]);

  std::vector<std::size_t> previous;
  std::vector<double> dist(n);
  for (int it = 0; it < cfg.max_iters; ++it) {
    std::vector<std::size_t> assignment(n);
    for (std::size_t i = 0; i < n; ++i) {
      assignment[i] = detail::nearest_centroid(points[i], out.centroids, &dist[i]);
    }

    std::vector<std::size_t> counts(K, 0);
    for (std::size_t a : assignment) ++counts[a];
    for (std::size_t j = 0; j < K; ++j) {
      if (counts[j] > 0) continue;
      std::size_t donor = n;
      double far = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[assignment[i]] > 1 && dist[i] > far) {
          far = dist[i];
          donor = i;
        }
      }
      --counts[assignment[donor]];
      assignment[donor] = j;
      counts[j] = 1;
      dist[donor] = 0.0;
    }

    const bool changed = assignment != previous;
    out.centroids = detail::cluster_means(points, assignment, K);
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sse += (points[i] - out.centroids[assignment[i]]).squaredNorm();
    }
    out.sse_history.push_back(sse);
    out.iterations = it + 1;
    previous = std::move(assignment);
    if (!changed) {
      out.converged = true;
      break;
    }
  }
  out.assignment = std::move(previous);
  return out;
}

/// SST about the global mean, SSE about the cluster means, SSB between
/// the cluster means and the global mean. SST = SSE + SSB.
inline VarianceDecomposition variance_decomposition(const MatrixStack& stack,
                                                    const std::vector<std::size_t>& assignment) {
  require(assignment.size() == stack.size(), ErrorCode::ShapeMismatch,
          "assignment length differs from stack size");
  require_nonempty(stack);
  const std::size_t K = *std::max_element(assignment.begin(), assignment.end()) + 1;
  std::vector<Vector> points;
  points.reserve(stack.size());
  for (const auto& A : stack.samples()) points.push_back(vectorize(A));

  Vector mean = Vector::Zero(points.front().size());
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());

  const auto means = detail::cluster_means(points, assignment, K);
  std::vector<std::size_t> counts(K, 0);
  for (std::size_t a : assignment) ++counts[a];

  VarianceDecomposition out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.sst += (points[i] - mean).squaredNorm();
    out.sse += (points[i] - means[assignment[i]]).squaredNorm();
  }
  for (std::size_t j = 0; j < K; ++j) {
    out.ssb += static_cast<double>(counts[j]) * (means[j] - mean).squaredNorm();
  }
  return out;
}

inline VarianceDecomposition variance_decomposition(const MatrixStack& stack,
                                                    const VClustering& clustering) {
  return variance_decomposition(stack, clustering.assignment);
}

}  // namespace cglram
