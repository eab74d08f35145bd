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

// Run records, method comparisons and their JSON / CSV emission.
//
// Run CSV columns, in order:
//   method,dataset,N,r,c,K,k,seed,wcssre,initial_wcssre,outer_iterations,
//   inner_iterations,storage,wall_ms,eta,max_outer,inner_rel_tol,
//   inner_max_iters,init,kmeans_max_iters,normalization,wcssre_history,error
// wcssre_history is ';'-separated. Comparison CSV columns:
//   k,baseline,candidate,err_initial,err_final,reduction_ratio
// Plot CSV: k followed by one best-WCSSRE column per method present.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cglram/error.hpp"

namespace cglram {

using Json = nlohmann::ordered_json;

struct RunConfigEcho {
  double eta = 0.0;
  int max_outer = 0;
  double inner_rel_tol = 0.0;
  int inner_max_iters = 0;
  std::string init;
  int kmeans_max_iters = 0;
  std::string normalization;

  bool operator==(const RunConfigEcho&) const = default;
};

struct RunRecord {
  std::string method;
  std::string dataset;
  std::uint64_t N = 0;
  std::uint64_t r = 0;
  std::uint64_t c = 0;
  std::uint64_t K = 0;
  std::uint64_t k = 0;
  std::uint64_t seed = 0;
  double wcssre = 0.0;
  // Objective right after initialization, before any reassignment.
  double initial_wcssre = 0.0;
  std::vector<double> wcssre_history;
  int outer_iterations = 0;
  int inner_iterations = 0;
  std::uint64_t storage = 0;
  double wall_ms = 0.0;
  RunConfigEcho config;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
  bool operator==(const RunRecord&) const = default;
};

struct Comparison {
  std::uint64_t k = 0;
  std::string baseline;
  std::string candidate;
  double err_initial = 0.0;
  double err_final = 0.0;
  double reduction_ratio = 0.0;

  bool operator==(const Comparison&) const = default;
};

struct Report {
  std::vector<RunRecord> runs;
  std::vector<Comparison> comparisons;

  bool operator==(const Report&) const = default;
};

/// (err_initial - err_final) / err_initial, zero when err_initial is zero.
inline double error_reduction_ratio(double err_initial, double err_final) {
  return err_initial > 0.0 ? (err_initial - err_final) / err_initial : 0.0;
}

inline Json record_to_json(const RunRecord& r) {
  return Json{
      {"method", r.method},
      {"dataset", r.dataset},
      {"N", r.N},
      {"r", r.r},
      {"c", r.c},
      {"K", r.K},
      {"k", r.k},
      {"seed", r.seed},
      {"wcssre", r.wcssre},
      {"initial_wcssre", r.initial_wcssre},
      {"wcssre_history", r.wcssre_history},
      {"outer_iterations", r.outer_iterations},
      {"inner_iterations", r.inner_iterations},
      {"storage", r.storage},
      {"wall_ms", r.wall_ms},
      {"config",
       {{"eta", r.config.eta},
        {"max_outer", r.config.max_outer},
        {"inner_rel_tol", r.config.inner_rel_tol},
        {"inner_max_iters", r.config.inner_max_iters},
        {"init", r.config.init},
        {"kmeans_max_iters", r.config.kmeans_max_iters},
        {"normalization", r.config.normalization}}},
      {"error", r.error},
  };
}

inline RunRecord record_from_json(const Json& j) {
  RunRecord r;
  r.method = j.at("method").get<std::string>();
  r.dataset = j.at("dataset").get<std::string>();
  r.N = j.at("N").get<std::uint64_t>();
  r.r = j.at("r").get<std::uint64_t>();
  r.c = j.at("c").get<std::uint64_t>();
  r.K = j.at("K").get<std::uint64_t>();
  r.k = j.at("k").get<std::uint64_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.wcssre = j.at("wcssre").get<double>();
  r.initial_wcssre = j.at("initial_wcssre").get<double>();
  r.wcssre_history = j.at("wcssre_history").get<std::vector<double>>();
  r.outer_iterations = j.at("outer_iterations").get<int>();
  r.inner_iterations = j.at("inner_iterations").get<int>();
  r.storage = j.at("storage").get<std::uint64_t>();
  r.wall_ms = j.at("wall_ms").get<double>();
  const auto& c = j.at("config");
  r.config.eta = c.at("eta").get<double>();
  r.config.max_outer = c.at("max_outer").get<int>();
  r.config.inner_rel_tol = c.at("inner_rel_tol").get<double>();
  r.config.inner_max_iters = c.at("inner_max_iters").get<int>();
  r.config.init = c.at("init").get<std::string>();
  r.config.kmeans_max_iters = c.at("kmeans_max_iters").get<int>();
  r.config.normalization = c.at("normalization").get<std::string>();
  r.error = j.at("error").get<std::string>();
  return r;
}

inline Json report_to_json(const Report& report) {
  Json runs = Json::array();
  for (const auto& r : report.runs) runs.push_back(record_to_json(r));
  Json comparisons = Json::array();
  for (const auto& c : report.comparisons) {
    comparisons.push_back({{"k", c.k},
                           {"baseline", c.baseline},
                           {"candidate", c.candidate},
                           {"err_initial", c.err_initial},
                           {"err_final", c.err_final},
                           {"reduction_ratio", c.reduction_ratio}});
  }
  return Json{{"runs", std::move(runs)}, {"comparisons", std::move(comparisons)}};
}

inline Report report_from_json(const Json& j) {
  Report report;
  for (const auto& r : j.at("runs")) report.runs.push_back(record_from_json(r));
  for (const auto& c : j.at("comparisons")) {
    report.comparisons.push_back({c.at("k").get<std::uint64_t>(), c.at("baseline").get<std::string>(),
                                  c.at("candidate").get<std::string>(),
                                  c.at("err_initial").get<double>(), c.at("err_final").get<double>(),
                                  c.at("reduction_ratio").get<double>()});
  }
  return report;
}

inline Report parse_report_json(const std::string& text) {
  try {
    return report_from_json(Json::parse(text));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::IoFailure, std::string("malformed report JSON: ") + e.what());
  }
}

namespace csv {

inline std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace csv

inline constexpr const char* kRunCsvHeader =
    "method,dataset,N,r,c,K,k,seed,wcssre,initial_wcssre,outer_iterations,inner_iterations,"
    "storage,wall_ms,eta,max_outer,inner_rel_tol,inner_max_iters,init,kmeans_max_iters,"
    "normalization,wcssre_history,error";

inline constexpr const char* kComparisonCsvHeader =
    "k,baseline,candidate,err_initial,err_final,reduction_ratio";

inline std::string runs_to_csv(const Report& report) {
  std::ostringstream out;
  out << kRunCsvHeader << '\n';
  for (const auto& r : report.runs) {
    std::string history;
    for (std::size_t i = 0; i < r.wcssre_history.size(); ++i) {
      if (i) history += ';';
      history += csv::real(r.wcssre_history[i]);
    }
    out << csv::quote(r.method) << ',' << csv::quote(r.dataset) << ',' << r.N << ',' << r.r << ','
        << r.c << ',' << r.K << ',' << r.k << ',' << r.seed << ',' << csv::real(r.wcssre) << ','
        << csv::real(r.initial_wcssre) << ',' << r.outer_iterations << ',' << r.inner_iterations
        << ',' << r.storage << ',' << csv::real(r.wall_ms) << ',' << csv::real(r.config.eta) << ','
        << r.config.max_outer << ',' << csv::real(r.config.inner_rel_tol) << ','
        << r.config.inner_max_iters << ',' << csv::quote(r.config.init) << ','
        << r.config.kmeans_max_iters << ',' << csv::quote(r.config.normalization) << ','
        << history << ',' << csv::quote(r.error) << '\n';
  }
  return out.str();
}

inline std::string comparisons_to_csv(const Report& report) {
  std::ostringstream out;
  out << kComparisonCsvHeader << '\n';
  for (const auto& c : report.comparisons) {
    out << c.k << ',' << csv::quote(c.baseline) << ',' << csv::quote(c.candidate) << ','
        << csv::real(c.err_initial) << ',' << csv::real(c.err_final) << ','
        << csv::real(c.reduction_ratio) << '\n';
  }
  return out.str();
}

/// k against the best (lowest) WCSSRE of every method, one row per k.
inline std::string plot_to_csv(const Report& report) {
  std::vector<std::string> methods;
  std::map<std::uint64_t, std::map<std::string, double>> best;
  for (const auto& r : report.runs) {
    if (!r.ok()) continue;
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
    auto& slot = best[r.k];
    auto it = slot.find(r.method);
    if (it == slot.end() || r.wcssre < it->second) slot[r.method] = r.wcssre;
  }
  std::ostringstream out;
  out << 'k';
  for (const auto& m : methods) out << ',' << m;
  out << '\n';
  for (const auto& [k, row] : best) {
    out << k;
    for (const auto& m : methods) {
      out << ',';
      if (auto it = row.find(m); it != row.end()) out << csv::real(it->second);
    }
    out << '\n';
  }
  return out.str();
}

enum class ReportFormat { Json, Csv };

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::IoFailure, "cannot open " + path.string());
  out << text;
  require(static_cast<bool>(out), ErrorCode::IoFailure, "short write to " + path.string());
}

inline std::string report_json_text(const Report& report) {
  return report_to_json(report).dump(2) + "\n";
}

/// JSON writes one document to `path`. CSV writes the runs to `path` and
/// the comparisons and plot tables next to it as <stem>_comparisons.csv
/// and <stem>_plot.csv.
inline void emit(const Report& report, ReportFormat format, const std::filesystem::path& path) {
  if (format == ReportFormat::Json) {
    write_text(path, report_json_text(report));
    return;
  }
  write_text(path, runs_to_csv(report));
  const auto dir = path.parent_path();
  const auto stem = path.stem().string();
  write_text(dir / (stem + "_comparisons.csv"), comparisons_to_csv(report));
  write_text(dir / (stem + "_plot.csv"), plot_to_csv(report));
}

}  // namespace cglram
