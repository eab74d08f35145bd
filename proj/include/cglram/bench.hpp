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

// Benchmark harness: runs the compression methods over a rank sweep and a
// seed list, then derives error-reduction ratios from the best seed of
// every method.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cglram/baselines.hpp"
#include "cglram/cluster.hpp"
#include "cglram/report.hpp"

namespace cglram {

enum class CglramStart { RandomPartition, SampleSeeds, Kmeans };

inline constexpr std::string_view to_string(CglramStart s) {
  switch (s) {
    case CglramStart::RandomPartition: return "random-partition";
    case CglramStart::SampleSeeds: return "sample-seeds";
    case CglramStart::Kmeans: return "kmeans";
  }
  return "unknown";
}

inline CglramStart cglram_start_from_string(std::string_view name) {
  for (auto s : {CglramStart::RandomPartition, CglramStart::SampleSeeds, CglramStart::Kmeans}) {
    if (name == to_string(s)) return s;
  }
  throw Error(ErrorCode::InvalidSpec, "unknown init strategy '" + std::string(name) + "'");
}

struct BenchConfig {
  std::size_t K = 10;
  double eta = 1e-4;
  int max_outer = 50;
  IterationConfig inner{30, 1e-6};
  IterationConfig glram{100, 1e-6};
  IterationConfig kmeans{100, 1e-6};
  CglramStart start = CglramStart::RandomPartition;
  std::string dataset = "unnamed";
  std::string normalization = "unit";  // pixel/255; "raw" otherwise
  unsigned workers = 1;
};

struct CompareRequest {
  std::vector<Index> ks;
  std::vector<std::uint64_t> seeds{0, 1, 2};
  std::vector<Method> methods;
};

/// k = round(tau * r) clamped to [1, r].
inline Index reduction_ratio_to_rank(double tau, Index r) {
  require(tau > 0.0 && tau <= 1.0 && std::isfinite(tau), ErrorCode::InvalidRatio,
          "ratio must lie in (0, 1], got " + std::to_string(tau));
  require(r >= 1, ErrorCode::InvalidRatio, "dimension must be >= 1");
  const auto k = static_cast<Index>(std::llround(tau * static_cast<double>(r)));
  return std::clamp<Index>(k, 1, r);
}

/// CGLRAM started from the K-means+GLRAM model with the same seed.
inline ClusterModel cglram_from_kmeans(const MatrixStack& stack, const CglramConfig& cfg,
                                       const KmeansGlramConfig& kcfg = {}) {
  ClusterModel seeded = kmeans_glram(stack, cfg.K, cfg.k, cfg.seed, kcfg);
  ClusterModel out = cglram_fit_from(stack, cfg, std::move(seeded.assignment),
                                     std::move(seeded.centroids));
  out.inner_iterations += seeded.inner_iterations;
  return out;
}

struct MethodRun {
  RunRecord record;
  std::optional<ClusterModel> model;
  std::optional<ErrorCode> error_code;
};

inline RunConfigEcho echo(const BenchConfig& cfg, Method method) {
  RunConfigEcho e;
  e.normalization = cfg.normalization;
  switch (method) {
    case Method::Cglram:
      e.eta = cfg.eta;
      e.max_outer = cfg.max_outer;
      e.inner_rel_tol = cfg.inner.rel_tol;
      e.inner_max_iters = cfg.inner.max_iters;
      e.init = std::string(to_string(cfg.start));
      if (cfg.start == CglramStart::Kmeans) e.kmeans_max_iters = cfg.kmeans.max_iters;
      break;
    case Method::KmeansGlram:
      e.inner_rel_tol = cfg.inner.rel_tol;
      e.inner_max_iters = cfg.inner.max_iters;
      e.init = "kmeans";
      e.kmeans_max_iters = cfg.kmeans.max_iters;
      break;
    case Method::Glram:
      e.inner_rel_tol = cfg.glram.rel_tol;
      e.inner_max_iters = cfg.glram.max_iters;
      e.init = "identity-top";
      break;
    case Method::Svd: e.init = "none"; break;
  }
  return e;
}

/// Runs one method once. Failures are captured in the record.
inline MethodRun run_method(const MatrixStack& stack, Method method, Index k, std::uint64_t seed,
                            const BenchConfig& cfg) {
  MethodRun out;
  RunRecord& rec = out.record;
  rec.method = std::string(to_string(method));
  rec.dataset = cfg.dataset;
  rec.N = stack.size();
  rec.r = static_cast<std::uint64_t>(stack.rows());
  rec.c = static_cast<std::uint64_t>(stack.cols());
  rec.k = static_cast<std::uint64_t>(k);
  rec.seed = seed;
  rec.config = echo(cfg, method);
  switch (method) {
    case Method::Glram: rec.K = 1; break;
    case Method::Svd: rec.K = stack.size(); break;
    default: rec.K = cfg.K;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    ClusterModel model;
    switch (method) {
      case Method::Glram: model = glram_model(stack, k, cfg.glram); break;
      case Method::Svd: model = svd_model(stack, k); break;
      case Method::KmeansGlram:
        model = kmeans_glram(stack, cfg.K, k, seed, {cfg.kmeans, cfg.inner});
        break;
      case Method::Cglram: {
        CglramConfig c;
        c.K = cfg.K;
        c.k = k;
        c.eta = cfg.eta;
        c.max_outer = cfg.max_outer;
        c.inner = cfg.inner;
        c.seed = seed;
        if (cfg.start == CglramStart::Kmeans) {
          model = cglram_from_kmeans(stack, c, {cfg.kmeans, cfg.inner});
        } else {
          c.init = cfg.start == CglramStart::SampleSeeds ? CentroidInit::SampleSeeds
                                                         : CentroidInit::RandomPartition;
          model = cglram_fit(stack, c);
        }
        break;
      }
    }
    rec.wcssre = model.wcssre();
    rec.initial_wcssre = model.initial_wcssre();
    if (method == Method::Cglram) rec.wcssre_history = model.wcssre_history;
    rec.outer_iterations = model.outer_iterations;
    rec.inner_iterations = model.inner_iterations;
    rec.storage = storage_count(method, rec.N, rec.K, rec.k, rec.r, rec.c);
    out.model = std::move(model);
  } catch (const Error& e) {
    rec.error = std::string(to_string(e.code())) + ": " + e.what();
    out.error_code = e.code();
  }
  rec.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/// Pairwise reduction ratios per k from each method's best run, plus the
/// initial-versus-final objective of the best CGLRAM run.
inline std::vector<Comparison> derive_comparisons(const std::vector<RunRecord>& runs) {
  std::map<std::uint64_t, std::map<std::string, const RunRecord*>> best;
  for (const auto& r : runs) {
    if (!r.ok()) continue;
    auto& slot = best[r.k][r.method];
    if (!slot || r.wcssre < slot->wcssre) slot = &r;
  }
  const std::vector<std::pair<Method, Method>> pairs{
      {Method::Glram, Method::Cglram},
      {Method::KmeansGlram, Method::Cglram},
      {Method::Glram, Method::KmeansGlram},
  };
  std::vector<Comparison> out;
  for (const auto& [k, by_method] : best) {
    for (const auto& [base, cand] : pairs) {
      auto b = by_method.find(std::string(to_string(base)));
      auto c = by_method.find(std::string(to_string(cand)));
      if (b == by_method.end() || c == by_method.end()) continue;
      out.push_back({k, b->first, c->first, b->second->wcssre, c->second->wcssre,
                     error_reduction_ratio(b->second->wcssre, c->second->wcssre)});
    }
    if (auto c = by_method.find("cglram"); c != by_method.end()) {
      const RunRecord& r = *c->second;
      out.push_back({k, "cglram-initial", "cglram", r.initial_wcssre, r.wcssre,
                     error_reduction_ratio(r.initial_wcssre, r.wcssre)});
    }
  }
  return out;
}

/// Runs every (method, k, seed) job, on up to cfg.workers threads. Records
/// come back ordered by method, then k, then seed regardless of schedule.
/// GLRAM and the SVD baseline are deterministic and run once per k with
/// seed 0. When `models` is non-null it receives the model of every run,
/// aligned with the records (empty for failed runs).
inline Report run_compare(const MatrixStack& stack, const CompareRequest& request,
                          const BenchConfig& cfg,
                          std::vector<std::optional<ClusterModel>>* models = nullptr) {
  std::vector<Method> methods = request.methods;
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
  std::vector<Index> ks = request.ks;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::vector<std::uint64_t> seeds = request.seeds;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  if (seeds.empty()) seeds.push_back(0);

  struct Job {
    Method method;
    Index k;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (Method m : methods) {
    const bool seeded = m == Method::Cglram || m == Method::KmeansGlram;
    for (Index k : ks) {
      if (seeded) {
        for (auto s : seeds) jobs.push_back({m, k, s});
      } else {
        jobs.push_back({m, k, 0});
      }
    }
  }

  std::vector<MethodRun> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      results[i] = run_method(stack, jobs[i].method, jobs[i].k, jobs[i].seed, cfg);
    }
  };
  const unsigned n_workers =
      std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(jobs.size())));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  Report report;
  for (auto& r : results) {
    report.runs.push_back(std::move(r.record));
    if (models) models->push_back(std::move(r.model));
  }
  report.comparisons = derive_comparisons(report.runs);
  return report;
}

}  // namespace cglram
