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

// Dense real-matrix primitives shared by every fitter: Frobenius metrics,
// a deterministic top-k symmetric eigensolver, and a thin SVD.

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "cglram/error.hpp"

namespace cglram {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

struct EigenResult {
  Vector values;   // descending
  Matrix vectors;  // column j pairs with values[j]
};

struct SvdResult {
  Matrix U;
  Vector singular_values;  // descending, non-negative
  Matrix V;
};

inline bool all_finite(const Matrix& A) { return A.allFinite(); }

inline void require_finite(const Matrix& A, const char* what) {
  require(A.allFinite(), ErrorCode::NonFinite, std::string(what) + " has NaN/Inf entries");
}

inline double frobenius_norm(const Matrix& A) { return A.norm(); }

inline double frobenius_norm_sq(const Matrix& A) { return A.squaredNorm(); }

// Flip each column so its largest-magnitude entry is positive. The first
// entry wins when several share the maximum magnitude up to rounding.
inline constexpr double kSignTieTolerance = 1e-12;

inline void canonicalize_signs(Matrix& vectors) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    Index pivot = 0;
    double best = -1.0;
    for (Index i = 0; i < vectors.rows(); ++i) {
      const double mag = std::abs(vectors(i, j));
      if (mag > best + kSignTieTolerance * std::abs(best)) {
        best = mag;
        pivot = i;
      }
    }
    if (vectors(pivot, j) < 0.0) vectors.col(j) = -vectors.col(j);
  }
}

/// Returns the k largest eigenpairs of a symmetric matrix. The input is
/// symmetrized as (S + S^T) / 2 before the solve, so Gram matrices that
/// picked up rounding asymmetry are accepted.
inline EigenResult top_k_eigs_sym(const Matrix& S, Index k) {
  require(S.rows() == S.cols(), ErrorCode::NonSquare,
          "eigensolve needs a square matrix, got " + std::to_string(S.rows()) + "x" +
              std::to_string(S.cols()));
  require(k >= 1 && k <= S.rows(), ErrorCode::RankOutOfRange,
          "k=" + std::to_string(k) + " outside [1, " + std::to_string(S.rows()) + "]");
  require_finite(S, "symmetric input");

  const Matrix sym = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  require(solver.info() == Eigen::Success, ErrorCode::ConvergenceFailure,
          "symmetric eigensolver did not converge");

  // Eigen returns ascending order.
  const Index n = sym.rows();
  EigenResult out;
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (Index j = 0; j < k; ++j) {
    out.values[j] = solver.eigenvalues()[n - 1 - j];
    out.vectors.col(j) = solver.eigenvectors().col(n - 1 - j);
  }
  canonicalize_signs(out.vectors);
  return out;
}

/// Thin SVD, min(rows, cols) singular triplets.
inline SvdResult full_svd(const Matrix& A) {
  require_finite(A, "svd input");
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  require(svd.info() == Eigen::Success, ErrorCode::ConvergenceFailure,
          "Jacobi SVD exceeded its sweep limit");
  SvdResult out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  // Pair signs through U so the triplets stay consistent.
  for (Index j = 0; j < out.U.cols(); ++j) {
    Index pivot = 0;
    out.U.col(j).cwiseAbs().maxCoeff(&pivot);
    if (out.U(pivot, j) < 0.0) {
      out.U.col(j) = -out.U.col(j);
      out.V.col(j) = -out.V.col(j);
    }
  }
  return out;
}

/// Frobenius error of the best rank-k approximation, sqrt of the discarded
/// squared singular values.
inline double tsvd_error(const Matrix& A, Index k) {
  const Index max_rank = std::min(A.rows(), A.cols());
  require(k >= 1 && k <= max_rank, ErrorCode::RankOutOfRange,
          "k=" + std::to_string(k) + " outside [1, " + std::to_string(max_rank) + "]");
  const Vector sigma = full_svd(A).singular_values;
  return std::sqrt(sigma.tail(max_rank - k).squaredNorm());
}

/// Best rank-k approximation U_k diag(s_k) V_k^T together with its factors.
inline SvdResult truncated_svd(const Matrix& A, Index k) {
  const Index max_rank = std::min(A.rows(), A.cols());
  require(k >= 1 && k <= max_rank, ErrorCode::RankOutOfRange,
          "k=" + std::to_string(k) + " outside [1, " + std::to_string(max_rank) + "]");
  SvdResult full = full_svd(A);
  return {full.U.leftCols(k), full.singular_values.head(k), full.V.leftCols(k)};
}

/// Orthonormal basis for the column span of a full-column-rank matrix.
inline Matrix orthonormalize(const Matrix& A) {
  Eigen::HouseholderQR<Matrix> qr(A);
  Matrix Q = qr.householderQ() * Matrix::Identity(A.rows(), A.cols());
  return Q;
}

/// max |Q^T Q - I| entrywise.
inline double orthonormality_defect(const Matrix& Q) {
  return (Q.transpose() * Q - Matrix::Identity(Q.cols(), Q.cols())).cwiseAbs().maxCoeff();
}

}  // namespace cglram
