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

// Comparison methods: per-matrix truncated SVD and K-means followed by one
// GLRAM fit per cluster. Also the storage-cost formulas of the three
// compression schemes.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cglram/cluster.hpp"
#include "cglram/glram.hpp"
#include "cglram/kmeans.hpp"

namespace cglram {

enum class Method { Glram, KmeansGlram, Cglram, Svd };

inline constexpr std::string_view to_string(Method m) {
  switch (m) {
    case Method::Glram: return "glram";
    case Method::KmeansGlram: return "kmeans-glram";
    case Method::Cglram: return "cglram";
    case Method::Svd: return "svd";
  }
  return "unknown";
}

inline Method method_from_string(std::string_view name) {
  for (Method m : {Method::Glram, Method::KmeansGlram, Method::Cglram, Method::Svd}) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorCode::UnknownMethod, "no method named '" + std::string(name) + "'");
}

/// Number of stored reals: N middles of k x k plus the projector columns.
/// SVD keeps a pair per sample, CGLRAM (and K-means+GLRAM) one per
/// cluster, GLRAM a single shared pair.
inline std::uint64_t storage_count(Method method, std::uint64_t N, std::uint64_t K,
                                   std::uint64_t k, std::uint64_t r, std::uint64_t c) {
  const std::uint64_t middles = N * k * k;
  const std::uint64_t pair = k * (r + c);
  switch (method) {
    case Method::Svd: return middles + N * pair;
    case Method::Cglram:
    case Method::KmeansGlram: return middles + K * pair;
    case Method::Glram: return middles + pair;
  }
  throw Error(ErrorCode::UnknownMethod, "storage formula for unknown method");
}

inline std::uint64_t storage_count(std::string_view method, std::uint64_t N, std::uint64_t K,
                                   std::uint64_t k, std::uint64_t r, std::uint64_t c) {
  return storage_count(method_from_string(method), N, K, k, r, c);
}

struct SvdBaseline {
  double total_error_sq = 0.0;
  std::uint64_t storage = 0;
};

inline SvdBaseline svd_baseline(const MatrixStack& stack, Index k) {
  require_nonempty(stack);
  require_rank(stack, k);
  SvdBaseline out;
  for (const auto& A : stack.samples()) {
    const double e = tsvd_error(A, k);
    out.total_error_sq += e * e;
  }
  out.storage = storage_count(Method::Svd, stack.size(), stack.size(), static_cast<std::uint64_t>(k),
                              static_cast<std::uint64_t>(stack.rows()),
                              static_cast<std::uint64_t>(stack.cols()));
  return out;
}

/// The per-matrix SVD baseline as a ClusterModel with one singleton
/// cluster per sample; middles are diag(sigma_1..sigma_k).
inline ClusterModel svd_model(const MatrixStack& stack, Index k) {
  require_nonempty(stack);
  require_rank(stack, k);
  ClusterModel model;
  model.K = stack.size();
  model.k = k;
  for (std::size_t i = 0; i < stack.size(); ++i) {
    SvdResult t = truncated_svd(stack[i], k);
    ProjectorPair pair{std::move(t.U), std::move(t.V)};
    model.middles.push_back(compress(pair, stack[i]));
    model.centroids.push_back(std::move(pair));
    model.assignment.push_back(i);
  }
  model.wcssre_history.push_back(wcssre(stack, model));
  model.converged = true;
  model.stop_reason = StopReason::FixedPoint;
  return model;
}

/// Plain GLRAM as a single-cluster ClusterModel.
inline ClusterModel glram_model(const MatrixStack& stack, Index k, const IterationConfig& cfg = {}) {
  GlramResult fit = glram_fit(stack, k, cfg);
  ClusterModel model;
  model.K = 1;
  model.k = k;
  model.assignment.assign(stack.size(), 0);
  model.middles = std::move(fit.compressed.middles);
  model.centroids.push_back(std::move(fit.compressed.pair));
  model.inner_iterations = fit.trace.iterations;
  model.wcssre_history.push_back(wcssre(stack, model));
  model.converged = fit.trace.converged;
  model.stop_reason = fit.trace.converged ? StopReason::Threshold : StopReason::MaxOuter;
  return model;
}

struct KmeansGlramConfig {
  IterationConfig kmeans{100, 1e-6};
  IterationConfig glram{30, 1e-6};
};

/// Vector K-means partition, then one GLRAM fit per cluster. No
/// reassignment follows.
inline ClusterModel kmeans_glram(const MatrixStack& stack, std::size_t K, Index k,
                                 std::uint64_t seed, const KmeansGlramConfig& cfg = {}) {
  require_nonempty(stack);
  require_rank(stack, k);
  const VClustering clustering = kmeans_fit(stack, K, seed, cfg.kmeans);

  ClusterModel model;
  model.K = K;
  model.k = k;
  model.assignment = clustering.assignment;
  model.centroids.resize(K);
  model.middles.assign(stack.size(), Matrix());
  const auto groups = detail::members_of(model.assignment, K);
  for (std::size_t j = 0; j < K; ++j) {
    GlramResult fit = detail::fit_members(stack, groups[j], Matrix::Identity(stack.rows(), k), k,
                                          cfg.glram, std::nullopt);
    model.inner_iterations += fit.trace.iterations;
    for (std::size_t m = 0; m < groups[j].size(); ++m) {
      model.middles[groups[j][m]] = std::move(fit.compressed.middles[m]);
    }
    model.centroids[j] = std::move(fit.compressed.pair);
  }
  model.outer_iterations = clustering.iterations;
  model.wcssre_history.push_back(wcssre(stack, model));
  model.converged = clustering.converged;
  model.stop_reason = clustering.converged ? StopReason::FixedPoint : StopReason::MaxOuter;
  return model;
}

}  // namespace cglram
