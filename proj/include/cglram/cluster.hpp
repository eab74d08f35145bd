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

// Clustering-based GLRAM. Each cluster's centroid is an orthonormal pair
// (L_j, R_j); a matrix belongs to the cluster whose two-sided projection
// reconstructs it best. Lloyd-style alternation between reassignment and
// per-cluster GLRAM refits descends the within-cluster sum of squared
// reconstruction errors (WCSSRE).

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cglram/glram.hpp"
#include "cglram/kmeans.hpp"
#include "cglram/stack.hpp"

namespace cglram {

enum class StopReason { Threshold, FixedPoint, MaxOuter };

inline constexpr std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Threshold: return "threshold";
    case StopReason::FixedPoint: return "fixed-point";
    case StopReason::MaxOuter: return "max-outer";
  }
  return "unknown";
}

enum class CentroidInit {
  RandomPartition,  // seeded partition into K non-empty groups, GLRAM per group
  SampleSeeds,      // K seeded samples, each contributing its truncated SVD pair
};

inline constexpr std::string_view to_string(CentroidInit init) {
  return init == CentroidInit::RandomPartition ? "random-partition" : "sample-seeds";
}

struct CglramConfig {
  std::size_t K = 2;
  Index k = 1;
  double eta = 1e-4;
  int max_outer = 50;
  IterationConfig inner{30, 1e-6};
  std::uint64_t seed = 0;
  CentroidInit init = CentroidInit::RandomPartition;
};

struct ClusterModel {
  std::size_t K = 0;
  Index k = 0;
  std::vector<ProjectorPair> centroids;
  std::vector<std::size_t> assignment;
  std::vector<Matrix> middles;  // per sample, under its own cluster's pair
  // wcssre_history[0] is the objective right after initialization; one
  // entry follows per refit round.
  std::vector<double> wcssre_history;
  // Objective after each reassignment with the centroids still frozen.
  std::vector<double> reassigned_history;
  int outer_iterations = 0;
  int inner_iterations = 0;  // GLRAM iterations summed over all refits
  bool converged = false;
  StopReason stop_reason = StopReason::MaxOuter;

  double wcssre() const { return wcssre_history.back(); }
  double initial_wcssre() const { return wcssre_history.front(); }
};

inline void require_valid(const CglramConfig& cfg, const MatrixStack& stack) {
  require_nonempty(stack);
  require(cfg.K >= 1 && cfg.K <= stack.size(), ErrorCode::TooManyClusters,
          "K=" + std::to_string(cfg.K) + " with N=" + std::to_string(stack.size()));
  require_rank(stack, cfg.k);
  require(cfg.eta > 0.0, ErrorCode::InvalidSpec, "eta must be positive");
  require(cfg.max_outer >= 1, ErrorCode::InvalidSpec, "max_outer must be >= 1");
  require_valid(cfg.inner);
}

/// Squared reconstruction error of A under the pair's two-sided projection.
inline double generalized_distance_sq(const Matrix& A, const ProjectorPair& pair) {
  return projection_residual_sq(A, pair);
}

/// Nearest centroid per sample; ties go to the lowest index. When
/// `distances` is non-null it receives each sample's winning distance.
inline std::vector<std::size_t> assign_clusters(const MatrixStack& stack,
                                                const std::vector<ProjectorPair>& centroids,
                                                std::vector<double>* distances = nullptr) {
  require(!centroids.empty(), ErrorCode::ShapeMismatch, "no centroids to assign to");
  for (const auto& pair : centroids) require_conforms(pair, stack.rows(), stack.cols());
  std::vector<std::size_t> out(stack.size());
  if (distances) distances->assign(stack.size(), 0.0);
  for (std::size_t i = 0; i < stack.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centroids.size(); ++j) {
      const double d = generalized_distance_sq(stack[i], centroids[j]);
      if (d < best) {
        best = d;
        out[i] = j;
      }
    }
    if (distances) (*distances)[i] = best;
  }
  return out;
}

/// sum_j sum_{i in V_j} ||A_i - L_j M_i R_j^T||_F^2 from the stored middles.
inline double wcssre(const MatrixStack& stack, const ClusterModel& model) {
  require(model.assignment.size() == stack.size() && model.middles.size() == stack.size(),
          ErrorCode::ShapeMismatch, "model does not match the stack");
  double total = 0.0;
  for (std::size_t i = 0; i < stack.size(); ++i) {
    require(model.assignment[i] < model.centroids.size(), ErrorCode::ShapeMismatch,
            "assignment refers to a missing centroid");
    const auto& pair = model.centroids[model.assignment[i]];
    require_conforms(pair, stack.rows(), stack.cols());
    total += (stack[i] - reconstruct(pair, model.middles[i])).squaredNorm();
  }
  return total;
}

namespace detail {

inline std::vector<std::vector<std::size_t>> members_of(const std::vector<std::size_t>& assignment,
                                                        std::size_t K) {
  std::vector<std::vector<std::size_t>> groups(K);
  for (std::size_t i = 0; i < assignment.size(); ++i) groups[assignment[i]].push_back(i);
  return groups;
}

inline ProjectorPair svd_pair(const Matrix& A, Index k) {
  SvdResult t = truncated_svd(A, k);
  return {std::move(t.U), std::move(t.V)};
}

// Refill every empty cluster with the sample farthest from its assigned
// centroid, drawn from clusters that keep at least one member. The refilled
// cluster restarts from that sample's truncated SVD pair, which is never
// worse than the distance the sample had before.
inline void repair_empty_clusters(const MatrixStack& stack, std::vector<std::size_t>& assignment,
                                  std::vector<double>& distances,
                                  std::vector<ProjectorPair>& centroids, Index k) {
  const std::size_t K = centroids.size();
  std::vector<std::size_t> counts(K, 0);
  for (std::size_t a : assignment) ++counts[a];
  for (std::size_t j = 0; j < K; ++j) {
    if (counts[j] > 0) continue;
    std::size_t donor = assignment.size();
    double far = -1.0;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (counts[assignment[i]] > 1 && distances[i] > far) {
        far = distances[i];
        donor = i;
      }
    }
    --counts[assignment[donor]];
    assignment[donor] = j;
    counts[j] = 1;
    centroids[j] = svd_pair(stack[donor], k);
    distances[donor] = generalized_distance_sq(stack[donor], centroids[j]);
  }
}

// Refit every cluster from its current pair and rebuild the middles.
inline void refit_all(const MatrixStack& stack, const CglramConfig& cfg, ClusterModel& model) {
  const auto groups = members_of(model.assignment, model.K);
  model.middles.assign(stack.size(), Matrix());
  for (std::size_t j = 0; j < model.K; ++j) {
    GlramResult fit = glram_refit(stack, groups[j], model.centroids[j], cfg.inner);
    model.inner_iterations += fit.trace.iterations;
    for (std::size_t m = 0; m < groups[j].size(); ++m) {
      model.middles[groups[j][m]] = std::move(fit.compressed.middles[m]);
    }
    model.centroids[j] = std::move(fit.compressed.pair);
  }
}

inline ClusterModel lloyd(const MatrixStack& stack, const CglramConfig& cfg, ClusterModel model) {
  model.wcssre_history.push_back(wcssre(stack, model));
  model.stop_reason = StopReason::MaxOuter;
  model.converged = false;
  for (int t = 1; t <= cfg.max_outer; ++t) {
    model.outer_iterations = t;
    std::vector<double> distances;
    auto assignment = assign_clusters(stack, model.centroids, &distances);
    double reassigned = 0.0;
    for (double d : distances) reassigned += d;
    model.reassigned_history.push_back(reassigned);

    if (assignment == model.assignment) {
      model.stop_reason = StopReason::FixedPoint;
      model.converged = true;
      break;
    }
    repair_empty_clusters(stack, assignment, distances, model.centroids, cfg.k);
    model.assignment = std::move(assignment);
    refit_all(stack, cfg, model);

    const double previous = model.wcssre_history.back();
    const double current = wcssre(stack, model);
    model.wcssre_history.push_back(current);
    if (previous <= 0.0 || (previous - current) / previous <= cfg.eta) {
      model.stop_reason = StopReason::Threshold;
      model.converged = true;
      break;
    }
  }
  return model;
}

inline ClusterModel initial_partition_model(const MatrixStack& stack, const CglramConfig& cfg) {
  const std::size_t n = stack.size();
  ClusterModel model;
  model.K = cfg.K;
  model.k = cfg.k;
  model.centroids.resize(cfg.K);
  model.middles.assign(n, Matrix());

  if (cfg.init == CentroidInit::RandomPartition) {
    const auto order = seeded_distinct(n, n, cfg.seed);
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    model.assignment.assign(n, 0);
    for (std::size_t pos = 0; pos < n; ++pos) {
      model.assignment[order[pos]] = pos < cfg.K ? pos : static_cast<std::size_t>(rng() % cfg.K);
    }
    const auto groups = members_of(model.assignment, cfg.K);
    for (std::size_t j = 0; j < cfg.K; ++j) {
      GlramResult fit = fit_members(stack, groups[j], Matrix::Identity(stack.rows(), cfg.k), cfg.k,
                                    cfg.inner, std::nullopt);
      model.inner_iterations += fit.trace.iterations;
      for (std::size_t m = 0; m < groups[j].size(); ++m) {
        model.middles[groups[j][m]] = std::move(fit.compressed.middles[m]);
      }
      model.centroids[j] = std::move(fit.compressed.pair);
    }
    return model;
  }

  const auto seeds = seeded_distinct(n, cfg.K, cfg.seed);
  for (std::size_t j = 0; j < cfg.K; ++j) model.centroids[j] = svd_pair(stack[seeds[j]], cfg.k);
  std::vector<double> distances;
  model.assignment = assign_clusters(stack, model.centroids, &distances);
  repair_empty_clusters(stack, model.assignment, distances, model.centroids, cfg.k);
  refit_all(stack, cfg, model);
  return model;
}

}  // namespace detail

/// Runs the clustered fit from a seeded initialization. Stops when the
/// relative WCSSRE reduction of a round is at most cfg.eta, when a
/// reassignment leaves every sample in place, or after cfg.max_outer rounds.
inline ClusterModel cglram_fit(const MatrixStack& stack, const CglramConfig& cfg) {
  require_valid(cfg, stack);
  return detail::lloyd(stack, cfg, detail::initial_partition_model(stack, cfg));
}

/// Runs the clustered fit from a caller-supplied partition and starting
/// pairs. Each cluster is first refit from its starting pair, so the
/// initial WCSSRE never exceeds the error of the supplied pairs under the
/// supplied partition.
inline ClusterModel cglram_fit_from(const MatrixStack& stack, const CglramConfig& cfg,
                                    std::vector<std::size_t> assignment,
                                    std::vector<ProjectorPair> centroids) {
  require_valid(cfg, stack);
  require(assignment.size() == stack.size(), ErrorCode::ShapeMismatch,
          "initial assignment length differs from stack size");
  require(centroids.size() == cfg.K, ErrorCode::ShapeMismatch,
          "initial centroid count differs from K");
  for (std::size_t a : assignment) {
    require(a < cfg.K, ErrorCode::ShapeMismatch, "initial assignment refers to a missing cluster");
  }
  for (const auto& pair : centroids) {
    require_conforms(pair, stack.rows(), stack.cols());
    require(pair.rank() == cfg.k, ErrorCode::RankOutOfRange, "initial pair rank differs from k");
  }

  ClusterModel model;
  model.K = cfg.K;
  model.k = cfg.k;
  model.centroids = std::move(centroids);
  model.assignment = std::move(assignment);
  std::vector<double> distances(stack.size());
  for (std::size_t i = 0; i < stack.size(); ++i) {
    distances[i] = generalized_distance_sq(stack[i], model.centroids[model.assignment[i]]);
  }
  detail::repair_empty_clusters(stack, model.assignment, distances, model.centroids, cfg.k);
  detail::refit_all(stack, cfg, model);
  return detail::lloyd(stack, cfg, std::move(model));
}

}  // namespace cglram
