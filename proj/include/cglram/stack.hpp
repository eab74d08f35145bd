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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cglram/linalg.hpp"

namespace cglram {

using Label = std::int32_t;

// An ordered collection of equally shaped sample matrices, optionally
// carrying ground-truth cluster labels.
class MatrixStack {
 public:
  MatrixStack() = default;

  MatrixStack(std::vector<Matrix> samples, std::optional<std::vector<Label>> labels = std::nullopt)
      : samples_(std::move(samples)), labels_(std::move(labels)) {
    require(!samples_.empty(), ErrorCode::EmptyStack, "a stack needs at least one sample");
    rows_ = samples_.front().rows();
    cols_ = samples_.front().cols();
    require(rows_ > 0 && cols_ > 0, ErrorCode::ShapeMismatch, "samples must be non-empty matrices");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      require(samples_[i].rows() == rows_ && samples_[i].cols() == cols_, ErrorCode::ShapeMismatch,
              "sample " + std::to_string(i) + " is " + std::to_string(samples_[i].rows()) + "x" +
                  std::to_string(samples_[i].cols()) + ", expected " + std::to_string(rows_) +
                  "x" + std::to_string(cols_));
      require_finite(samples_[i], "stack sample");
    }
    if (labels_) {
      require(labels_->size() == samples_.size(), ErrorCode::ShapeMismatch,
              "label count differs from sample count");
    }
  }

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  const Matrix& operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<Matrix>& samples() const noexcept { return samples_; }
  const std::optional<std::vector<Label>>& labels() const noexcept { return labels_; }

  /// Sum of squared Frobenius norms over all samples.
  double total_energy() const {
    double total = 0.0;
    for (const auto& A : samples_) total += A.squaredNorm();
    return total;
  }

  /// The first n samples (and labels).
  MatrixStack head(std::size_t n) const {
    n = std::min(n, samples_.size());
    std::vector<Matrix> s(samples_.begin(), samples_.begin() + static_cast<std::ptrdiff_t>(n));
    std::optional<std::vector<Label>> l;
    if (labels_) l.emplace(labels_->begin(), labels_->begin() + static_cast<std::ptrdiff_t>(n));
    return MatrixStack(std::move(s), std::move(l));
  }

  friend bool operator==(const MatrixStack& a, const MatrixStack& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.samples_.size() != b.samples_.size() ||
        a.labels_ != b.labels_) {
      return false;
    }
    for (std::size_t i = 0; i < a.samples_.size(); ++i) {
      if (a.samples_[i] != b.samples_[i]) return false;
    }
    return true;
  }

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Matrix> samples_;
  std::optional<std::vector<Label>> labels_;
};

inline void require_nonempty(const MatrixStack& stack) {
  require(!stack.empty(), ErrorCode::EmptyStack, "stack has no samples");
}

inline void require_rank(const MatrixStack& stack, Index k) {
  const Index max_rank = std::min(stack.rows(), stack.cols());
  require(k >= 1 && k <= max_rank, ErrorCode::RankOutOfRange,
          "k=" + std::to_string(k) + " outside [1, " + std::to_string(max_rank) + "]");
}

}  // namespace cglram
