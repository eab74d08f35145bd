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

// Test-only oracles. Nothing here calls into the library's solvers, so the
// checks built on them stay independent of the code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Eigenpairs {
  std::vector<double> values;  // descending
  Matrix vectors;              // column j pairs with values[j]
};

// Cyclic Jacobi rotations on a symmetric matrix.
inline Eigenpairs jacobi_eigen(Matrix S, int max_sweeps = 100) {
  const Eigen::Index n = S.rows();
  Matrix V = Matrix::Identity(n, n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += S(p, q) * S(p, q);
    if (off < 1e-30 * std::max(1.0, S.squaredNorm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (S(p, q) == 0.0) continue;
        const double theta = (S(q, q) - S(p, p)) / (2.0 * S(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1.0 / std::sqrt(t * t + 1);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double skp = S(k, p), skq = S(k, q);
          S(k, p) = c * skp - s * skq;
          S(k, q) = s * skp + c * skq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double spk = S(p, k), sqk = S(q, k);
          S(p, k) = c * spk - s * sqk;
          S(q, k) = s * spk + c * sqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return S(a, a) > S(b, b); });
  Eigenpairs out;
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values.push_back(S(order[j], order[j]));
    out.vectors.col(j) = V.col(order[j]);
  }
  return out;
}

// Singular values as square roots of the Jacobi eigenvalues of A^T A (or
// A A^T, whichever is smaller), descending.
inline std::vector<double> singular_values(const Matrix& A) {
  const Matrix gram = A.rows() >= A.cols() ? Matrix(A.transpose() * A) : Matrix(A * A.transpose());
  auto eig = jacobi_eigen(gram);
  std::vector<double> out;
  for (double v : eig.values) out.push_back(std::sqrt(std::max(v, 0.0)));
  return out;
}

// ||A - L M R^T||_F^2 by explicit scalar loops.
inline double residual_sq_loops(const Matrix& A, const Matrix& L, const Matrix& M, const Matrix& R) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      double approx = 0.0;
      for (Eigen::Index a = 0; a < M.rows(); ++a)
        for (Eigen::Index b = 0; b < M.cols(); ++b) approx += L(i, a) * M(a, b) * R(j, b);
      const double d = A(i, j) - approx;
      total += d * d;
    }
  }
  return total;
}

// L^T A R by explicit scalar loops.
inline Matrix middle_loops(const Matrix& A, const Matrix& L, const Matrix& R) {
  Matrix M = Matrix::Zero(L.cols(), R.cols());
  for (Eigen::Index a = 0; a < L.cols(); ++a)
    for (Eigen::Index b = 0; b < R.cols(); ++b)
      for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) M(a, b) += L(i, a) * A(i, j) * R(j, b);
  return M;
}

// Modified Gram-Schmidt, used to build random orthonormal frames in tests.
inline Matrix gram_schmidt(Matrix Q) {
  for (Eigen::Index j = 0; j < Q.cols(); ++j) {
    for (Eigen::Index p = 0; p < j; ++p) Q.col(j) -= Q.col(p).dot(Q.col(j)) * Q.col(p);
    Q.col(j) /= Q.col(j).norm();
  }
  return Q;
}

inline Matrix gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix A(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) A(i, j) = g(rng);
  return A;
}

inline Matrix random_orthonormal(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  return gram_schmidt(gaussian(rng, rows, cols));
}

// Largest fraction of samples whose predicted cluster maps to the true
// label under a one-to-one relabeling, by enumerating permutations.
inline double label_agreement(const std::vector<std::size_t>& predicted,
                              const std::vector<std::int32_t>& truth) {
  std::size_t clusters = 0;
  for (auto p : predicted) clusters = std::max(clusters, p + 1);
  for (auto t : truth) clusters = std::max(clusters, static_cast<std::size_t>(t) + 1);
  std::vector<std::size_t> perm(clusters);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      if (perm[predicted[i]] == static_cast<std::size_t>(truth[i])) ++hits;
    }
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(predicted.size());
}

}  // namespace oracle
