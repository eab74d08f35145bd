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
#include <random>
#include <vector>

#include "cglram.hpp"
#include "oracles.hpp"

namespace testutil {

inline cglram::MatrixStack random_stack(std::mt19937_64& rng, std::size_t n, cglram::Index r,
                                        cglram::Index c) {
  std::vector<cglram::Matrix> samples;
  for (std::size_t i = 0; i < n; ++i) samples.push_back(oracle::gaussian(rng, r, c));
  return cglram::MatrixStack(std::move(samples));
}

inline cglram::ProjectorPair random_pair(std::mt19937_64& rng, cglram::Index r, cglram::Index c,
                                         cglram::Index k) {
  return {oracle::random_orthonormal(rng, r, k), oracle::random_orthonormal(rng, c, k)};
}

inline bool non_increasing(const std::vector<double>& h, double slack) {
  for (std::size_t t = 1; t < h.size(); ++t) {
    if (h[t] > h[t - 1] + slack) return false;
  }
  return true;
}

}  // namespace testutil
