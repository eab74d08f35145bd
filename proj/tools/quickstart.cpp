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

// Generates a small clustered stack, fits GLRAM and CGLRAM at the same
// rank, and prints both objectives.

#include <cstdio>

#include "cglram.hpp"

int main() {
  cglram::SynthSpec spec;
  spec.K_true = 3;
  spec.per_cluster = {20, 20, 20};
  spec.rows = spec.cols = 16;
  spec.k_true = 3;
  spec.noise_sigma = 0.01;
  spec.seed = 1;
  const cglram::MatrixStack stack = cglram::synth_generate(spec);

  const auto glram = cglram::glram_model(stack, 3);

  cglram::CglramConfig cfg;
  cfg.K = 3;
  cfg.k = 3;
  const auto model = cglram::cglram_fit(stack, cfg);

  std::printf("GLRAM  WCSSRE %.6g (storage %llu)\n", glram.wcssre(),
              static_cast<unsigned long long>(cglram::storage_count(
                  cglram::Method::Glram, stack.size(), 1, 3, stack.rows(), stack.cols())));
  std::printf("CGLRAM WCSSRE %.6g after %d rounds (%s), storage %llu\n", model.wcssre(),
              model.outer_iterations, std::string(cglram::to_string(model.stop_reason)).c_str(),
              static_cast<unsigned long long>(cglram::storage_count(
                  cglram::Method::Cglram, stack.size(), 3, 3, stack.rows(), stack.cols())));
  std::printf("reduction %.1f%%\n",
              100.0 * cglram::error_reduction_ratio(glram.wcssre(), model.wcssre()));
  return 0;
}
