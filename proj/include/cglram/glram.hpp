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

// Generalized low rank approximation of a matrix collection: one shared
// orthonormal pair (L, R) such that every sample is approximated by
// L M_i R^T with M_i = L^T A_i R. Fitted by alternating top-k
// eigendecompositions of the two one-sided Gram matrices.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "cglram/linalg.hpp"
#include "cglram/stack.hpp"

namespace cglram {

struct IterationConfig {
  int max_iters = 100;
  double rel_tol = 1e-6;
};

enum class InitStrategy { IdentityTop, SeededRandomOrthonormal };

struct ProjectorPair {
  Matrix left;   // r x k, orthonormal columns
  Matrix right;  // c x k, orthonormal columns

  Index rank() const noexcept { return left.cols(); }
};

struct CompressedSet {
  ProjectorPair pair;
  std::vector<Matrix> middles;  // k x k, one per sample
};

struct FitTrace {
  std::vector<double> rmsre_history;
  std::vector<double> objective_history;  // sum of ||L^T A_i R||_F^2
  int iterations = 0;
  bool converged = false;
};

struct GlramResult {
  CompressedSet compressed;
  FitTrace trace;

  const ProjectorPair& pair() const noexcept { return compressed.pair; }
  double final_rmsre() const { return trace.rmsre_history.back(); }
};

inline void require_valid(const IterationConfig& cfg) {
  require(cfg.max_iters >= 1, ErrorCode::InvalidSpec, "max_iters must be >= 1");
  require(cfg.rel_tol > 0.0, ErrorCode::InvalidSpec, "rel_tol must be positive");
}

inline void require_conforms(const ProjectorPair& pair, Index rows, Index cols) {
  require(pair.left.rows() == rows && pair.right.rows() == cols &&
              pair.left.cols() == pair.right.cols() && pair.left.cols() >= 1,
          ErrorCode::ShapeMismatch, "projector pair does not conform to sample shape");
}

/// L M R^T.
inline Matrix reconstruct(const ProjectorPair& pair, const Matrix& middle) {
  require(middle.rows() == pair.left.cols() && middle.cols() == pair.right.cols(),
          ErrorCode::ShapeMismatch,
          "middle is " + std::to_string(middle.rows()) + "x" + std::to_string(middle.cols()) +
              ", pair rank is " + std::to_string(pair.rank()));
  return pair.left * middle * pair.right.transpose();
}

/// L^T A R.
inline Matrix compress(const ProjectorPair& pair, const Matrix& A) {
  require(A.rows() == pair.left.rows() && A.cols() == pair.right.rows(), ErrorCode::ShapeMismatch,
          "sample does not conform to projector pair");
  return pair.left.transpose() * A * pair.right;
}

/// ||A - L (L^T A R) R^T||_F^2, the squared distance from A to the
/// two-sided subspace of the pair.
inline double projection_residual_sq(const Matrix& A, const ProjectorPair& pair) {
  const Matrix middle = compress(pair, A);
  return (A - pair.left * middle * pair.right.transpose()).squaredNorm();
}

inline ProjectorPair glram_init(const MatrixStack& stack, Index k, InitStrategy strategy,
                                std::uint64_t seed = 0) {
  require_rank(stack, k);
  const Index r = stack.rows();
  const Index c = stack.cols();
  ProjectorPair pair;
  if (strategy == InitStrategy::IdentityTop) {
    pair.left = Matrix::Identity(r, k);
    pair.right = Matrix::Identity(c, k);
    return pair;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix gl(r, k);
  Matrix gr(c, k);
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i < r; ++i) gl(i, j) = gauss(rng);
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i < c; ++i) gr(i, j) = gauss(rng);
  pair.left = orthonormalize(gl);
  pair.right = orthonormalize(gr);
  return pair;
}

namespace detail {

inline std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

// Core alternating loop over a subset of the stack. When baseline_rmsre is
// given (warm start), the first iteration's relative drop is measured
// against it.
inline GlramResult fit_members(const MatrixStack& stack, std::span<const std::size_t> members,
                               Matrix left, Index k, const IterationConfig& cfg,
                               std::optional<double> baseline_rmsre) {
  require(!members.empty(), ErrorCode::EmptyStack, "GLRAM fit over an empty member set");
  require_valid(cfg);
  const Index r = stack.rows();
  const Index c = stack.cols();
  const double n = static_cast<double>(members.size());

  GlramResult out;
  FitTrace& trace = out.trace;
  Matrix right(c, k);
  std::optional<double> previous = baseline_rmsre;

  for (int it = 0; it < cfg.max_iters; ++it) {
    Matrix gram_right = Matrix::Zero(c, c);
    for (std::size_t i : members) {
      const Matrix projected = left.transpose() * stack[i];  // k x c
      gram_right.noalias() += projected.transpose() * projected;
    }
    right = top_k_eigs_sym(gram_right, k).vectors;

    Matrix gram_left = Matrix::Zero(r, r);
    for (std::size_t i : members) {
      const Matrix projected = stack[i] * right;  // r x k
      gram_left.noalias() += projected * projected.transpose();
    }
    left = top_k_eigs_sym(gram_left, k).vectors;

    double objective = 0.0;
    double error_sq = 0.0;
    for (std::size_t i : members) {
      const Matrix middle = left.transpose() * stack[i] * right;
      objective += middle.squaredNorm();
      error_sq += (stack[i] - left * middle * right.transpose()).squaredNorm();
    }
    const double current = std::sqrt(error_sq / n);
    trace.rmsre_history.push_back(current);
    trace.objective_history.push_back(objective);
    trace.iterations = it + 1;

    if (previous) {
      const double prev = *previous;
      if (prev <= 0.0 || (prev - current) / prev < cfg.rel_tol) {
        trace.converged = true;
        break;
      }
    }
    previous = current;
  }

  out.compressed.pair = ProjectorPair{std::move(left), std::move(right)};
  out.compressed.middles.reserve(members.size());
  for (std::size_t i : members) {
    out.compressed.middles.push_back(compress(out.compressed.pair, stack[i]));
  }
  return out;
}

}  // namespace detail

/// Fits one shared pair to the whole stack. R is derived first from the
/// initial L, then L from the new R, until the relative RMSRE drop falls
/// below cfg.rel_tol or cfg.max_iters is reached.
inline GlramResult glram_fit(const MatrixStack& stack, Index k, const IterationConfig& cfg = {},
                             InitStrategy init = InitStrategy::IdentityTop,
                             std::uint64_t seed = 0) {
  require_nonempty(stack);
  require_rank(stack, k);
  const auto members = detail::all_indices(stack.size());
  return detail::fit_members(stack, members, glram_init(stack, k, init, seed).left, k, cfg,
                             std::nullopt);
}

/// Refits a pair to a subset of the stack, starting from a previous pair.
/// The result is never worse than the starting pair on those members.
inline GlramResult glram_refit(const MatrixStack& stack, std::span<const std::size_t> members,
                               const ProjectorPair& start, const IterationConfig& cfg = {}) {
  require_conforms(start, stack.rows(), stack.cols());
  require(!members.empty(), ErrorCode::EmptyStack, "GLRAM refit over an empty member set");
  double error_sq = 0.0;
  for (std::size_t i : members) error_sq += projection_residual_sq(stack[i], start);
  const double baseline = std::sqrt(error_sq / static_cast<double>(members.size()));
  return detail::fit_members(stack, members, start.left, start.rank(), cfg, baseline);
}

/// sqrt((1/N) sum ||A_i - L M_i R^T||_F^2).
inline double rmsre(const MatrixStack& stack, const CompressedSet& compressed) {
  require(compressed.middles.size() == stack.size(), ErrorCode::ShapeMismatch,
          "middle count differs from stack size");
  require_conforms(compressed.pair, stack.rows(), stack.cols());
  double total = 0.0;
  for (std::size_t i = 0; i < stack.size(); ++i) {
    total += (stack[i] - reconstruct(compressed.pair, compressed.middles[i])).squaredNorm();
  }
  return std::sqrt(total / static_cast<double>(stack.size()));
}

}  // namespace cglram
