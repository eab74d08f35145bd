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

// JSON persistence for fitted cluster models. Reals are written with
// round-trip precision, so a reloaded model reproduces its WCSSRE exactly.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

#include "cglram/cluster.hpp"

namespace cglram {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kModelFormat = "cglram-model";
inline constexpr int kModelVersion = 1;

struct ModelFile {
  std::string method;
  std::string dataset;
  std::uint64_t seed = 0;
  ClusterModel model;
};

inline Json matrix_to_json(const Matrix& A) {
  Json data = Json::array();
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j) data.push_back(A(i, j));
  return Json{{"rows", A.rows()}, {"cols", A.cols()}, {"data", std::move(data)}};
}

inline Matrix matrix_from_json(const Json& j) {
  const Index rows = j.at("rows").get<Index>();
  const Index cols = j.at("cols").get<Index>();
  const auto& data = j.at("data");
  require(rows >= 0 && cols >= 0 && static_cast<Index>(data.size()) == rows * cols,
          ErrorCode::ShapeMismatch, "matrix data length differs from rows*cols");
  Matrix A(rows, cols);
  std::size_t pos = 0;
  for (Index i = 0; i < rows; ++i)
    for (Index c = 0; c < cols; ++c) A(i, c) = data[pos++].get<double>();
  require_finite(A, "stored matrix");
  return A;
}

inline StopReason stop_reason_from_string(std::string_view name) {
  for (StopReason r : {StopReason::Threshold, StopReason::FixedPoint, StopReason::MaxOuter}) {
    if (name == to_string(r)) return r;
  }
  throw Error(ErrorCode::InvalidSpec, "unknown stop reason '" + std::string(name) + "'");
}

inline Json model_to_json(const ModelFile& file) {
  const ClusterModel& m = file.model;
  Json centroids = Json::array();
  for (const auto& pair : m.centroids) {
    centroids.push_back({{"left", matrix_to_json(pair.left)}, {"right", matrix_to_json(pair.right)}});
  }
  Json middles = Json::array();
  for (const auto& M : m.middles) middles.push_back(matrix_to_json(M));
  return Json{
      {"format", kModelFormat},
      {"version", kModelVersion},
      {"method", file.method},
      {"dataset", file.dataset},
      {"seed", file.seed},
      {"K", m.K},
      {"k", m.k},
      {"centroids", std::move(centroids)},
      {"assignment", m.assignment},
      {"middles", std::move(middles)},
      {"wcssre", m.wcssre_history.empty() ? 0.0 : m.wcssre()},
      {"wcssre_history", m.wcssre_history},
      {"reassigned_history", m.reassigned_history},
      {"outer_iterations", m.outer_iterations},
      {"inner_iterations", m.inner_iterations},
      {"converged", m.converged},
      {"stop_reason", to_string(m.stop_reason)},
  };
}

inline ModelFile model_from_json(const Json& j) {
  require(j.value("format", std::string()) == kModelFormat, ErrorCode::BadMagic,
          "not a cglram model document");
  require(j.at("version").get<int>() == kModelVersion, ErrorCode::BadMagic,
          "unsupported model version");
  ModelFile file;
  file.method = j.at("method").get<std::string>();
  file.dataset = j.at("dataset").get<std::string>();
  file.seed = j.at("seed").get<std::uint64_t>();
  ClusterModel& m = file.model;
  m.K = j.at("K").get<std::size_t>();
  m.k = j.at("k").get<Index>();
  for (const auto& c : j.at("centroids")) {
    m.centroids.push_back({matrix_from_json(c.at("left")), matrix_from_json(c.at("right"))});
  }
  m.assignment = j.at("assignment").get<std::vector<std::size_t>>();
  for (const auto& M : j.at("middles")) m.middles.push_back(matrix_from_json(M));
  m.wcssre_history = j.at("wcssre_history").get<std::vector<double>>();
  m.reassigned_history = j.at("reassigned_history").get<std::vector<double>>();
  m.outer_iterations = j.at("outer_iterations").get<int>();
  m.inner_iterations = j.at("inner_iterations").get<int>();
  m.converged = j.at("converged").get<bool>();
  m.stop_reason = stop_reason_from_string(j.at("stop_reason").get<std::string>());
  require(m.centroids.size() == m.K, ErrorCode::ShapeMismatch, "centroid count differs from K");
  require(m.middles.size() == m.assignment.size(), ErrorCode::ShapeMismatch,
          "middle count differs from assignment length");
  return file;
}

inline void save_model(const ModelFile& file, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::IoFailure, "cannot open " + path.string());
  out << model_to_json(file).dump() << '\n';
  require(static_cast<bool>(out), ErrorCode::IoFailure, "short write to " + path.string());
}

inline ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::IoFailure, "cannot open " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::IoFailure, path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace cglram
