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

// Command-line harness: synthesize stacks, fit single models, run method
// comparisons over rank sweeps and re-verify saved models.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cglram.hpp"

namespace fs = std::filesystem;
using namespace cglram;

namespace {

struct DataOptions {
  std::string path;
  std::string labels;
  bool raw_scale = false;
  std::size_t limit = 0;
};

void add_data_options(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("input", d.path, "dataset: MSTK1 stack, IDX3 images or CSV stack")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--labels", d.labels, "IDX1 label file for IDX3 input")->check(CLI::ExistingFile);
  cmd->add_flag("--raw-scale", d.raw_scale, "keep IDX pixels in [0,255] instead of [0,1]");
  cmd->add_option("--limit", d.limit, "use only the first N samples (0 = all)");
}

MatrixStack load_dataset(const DataOptions& d) {
  const auto bytes = io::read_bytes(d.path);
  MatrixStack stack;
  if (bytes.size() >= kStackMagic.size() &&
      std::equal(kStackMagic.begin(), kStackMagic.end(), bytes.begin())) {
    stack = decode_stack(bytes);
  } else if (bytes.size() >= 4 && io::read_be32(bytes.data()) == kIdxImageMagic) {
    std::optional<std::vector<Label>> labels;
    if (!d.labels.empty()) labels = parse_idx_labels(io::read_bytes(d.labels));
    if (labels && d.limit > 0) {
      // Labels are trimmed together with the images below.
      stack = parse_idx_images(bytes, std::nullopt, d.raw_scale);
      std::vector<Matrix> samples = stack.samples();
      labels->resize(std::min(labels->size(), samples.size()));
      stack = MatrixStack(std::move(samples), std::move(labels));
    } else {
      stack = parse_idx_images(bytes, std::move(labels), d.raw_scale);
    }
  } else if (fs::path(d.path).extension() == ".csv") {
    stack = load_csv_stack(d.path);
  } else {
    throw Error(ErrorCode::BadMagic, d.path + " is not an MSTK1, IDX3 or CSV stack");
  }
  if (d.limit > 0) stack = stack.head(d.limit);
  return stack;
}

void print_error(const std::string& code, const std::string& message) {
  Json j{{"error", {{"code", code}, {"message", message}}}};
  std::cerr << j.dump() << std::endl;
}

struct MethodOptions {
  std::size_t K = 10;
  double eta = 1e-4;
  int max_outer = 50;
  std::string init = "random-partition";
  double inner_tol = 1e-6;
  int inner_iters = 30;
  double glram_tol = 1e-6;
  int glram_iters = 100;
  int kmeans_iters = 100;
};

void add_method_options(CLI::App* cmd, MethodOptions& m) {
  cmd->add_option("--K", m.K, "cluster count")->capture_default_str();
  cmd->add_option("--eta", m.eta, "outer relative WCSSRE reduction threshold")->capture_default_str();
  cmd->add_option("--max-outer", m.max_outer, "cap on clustering rounds")->capture_default_str();
  cmd->add_option("--init", m.init, "CGLRAM start: random-partition, sample-seeds or kmeans")
      ->capture_default_str();
  cmd->add_option("--inner-tol", m.inner_tol, "per-cluster GLRAM relative tolerance")
      ->capture_default_str();
  cmd->add_option("--inner-iters", m.inner_iters, "per-cluster GLRAM iteration cap")
      ->capture_default_str();
  cmd->add_option("--glram-tol", m.glram_tol, "plain GLRAM relative tolerance")->capture_default_str();
  cmd->add_option("--glram-iters", m.glram_iters, "plain GLRAM iteration cap")->capture_default_str();
  cmd->add_option("--kmeans-iters", m.kmeans_iters, "Lloyd iteration cap")->capture_default_str();
}

BenchConfig bench_config(const MethodOptions& m, const DataOptions& d) {
  BenchConfig cfg;
  cfg.K = m.K;
  cfg.eta = m.eta;
  cfg.max_outer = m.max_outer;
  cfg.start = cglram_start_from_string(m.init);
  cfg.inner = {m.inner_iters, m.inner_tol};
  cfg.glram = {m.glram_iters, m.glram_tol};
  cfg.kmeans = {m.kmeans_iters, 1e-6};
  cfg.dataset = fs::path(d.path).filename().string();
  cfg.normalization = d.raw_scale ? "raw" : "unit";
  if (const char* env = std::getenv("CGLRAM_WORKERS")) {
    cfg.workers = static_cast<unsigned>(std::max(1, std::atoi(env)));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustered generalized low rank approximation of matrix collections"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "write a seeded clustered low-rank stack (MSTK1)");
  SynthSpec spec;
  spec.per_cluster.clear();
  std::string synth_out;
  std::vector<std::size_t> per_cluster{40};
  synth->add_option("--K-true", spec.K_true, "number of generator clusters")->capture_default_str();
  synth->add_option("--per-cluster", per_cluster,
                    "samples per cluster; one value applies to every cluster")
      ->delimiter(',');
  synth->add_option("--rows", spec.rows)->capture_default_str();
  synth->add_option("--cols", spec.cols)->capture_default_str();
  synth->add_option("--k-true", spec.k_true)->capture_default_str();
  synth->add_option("--noise", spec.noise_sigma)->capture_default_str();
  synth->add_option("--middle-scale", spec.middle_scale)->capture_default_str();
  synth->add_option("--seed", spec.seed)->capture_default_str();
  synth->add_option("-o,--out", synth_out, "output MSTK1 path")->required();

  // fit
  auto* fit = app.add_subcommand("fit", "fit one method and save the model");
  DataOptions fit_data;
  MethodOptions fit_method;
  std::string method_name = "cglram";
  Index fit_k = 4;
  std::uint64_t fit_seed = 0;
  std::string model_out;
  add_data_options(fit, fit_data);
  add_method_options(fit, fit_method);
  fit->add_option("--method", method_name, "glram, kmeans-glram, cglram or svd")
      ->capture_default_str();
  fit->add_option("--k", fit_k, "rank")->capture_default_str();
  fit->add_option("--seed", fit_seed)->capture_default_str();
  fit->add_option("-o,--model-out", model_out, "model JSON path")->required();

  // compare
  auto* compare = app.add_subcommand("compare", "run a method comparison over ranks and seeds");
  DataOptions cmp_data;
  MethodOptions cmp_method;
  std::vector<std::string> cmp_methods{"glram", "kmeans-glram", "cglram"};
  std::vector<Index> cmp_ks;
  std::vector<double> cmp_taus;
  std::vector<std::uint64_t> cmp_seeds{0, 1, 2};
  std::string cmp_format = "json";
  std::string cmp_out;
  std::string models_dir;
  int workers = 0;
  add_data_options(compare, cmp_data);
  add_method_options(compare, cmp_method);
  compare->add_option("--methods", cmp_methods, "comma list; empty string for none")
      ->delimiter(',')
      ->capture_default_str();
  compare->add_option("--ks", cmp_ks, "comma list of ranks")->delimiter(',');
  compare->add_option("--taus", cmp_taus, "comma list of reduction ratios in (0,1]")->delimiter(',');
  compare->add_option("--seeds", cmp_seeds, "comma list of seeds")->delimiter(',')->capture_default_str();
  compare->add_option("--format", cmp_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  compare->add_option("--out", cmp_out, "report path")->required();
  compare->add_option("--models-dir", models_dir, "also save every run's model here");
  compare->add_option("--workers", workers, "worker threads (default: $CGLRAM_WORKERS or 1)");

  // report
  auto* report = app.add_subcommand("report", "recompute WCSSRE of saved models");
  DataOptions rep_data;
  std::vector<std::string> model_paths;
  add_data_options(report, rep_data);
  report->add_option("--models", model_paths, "model JSON files")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      spec.per_cluster = per_cluster.size() == 1
                             ? std::vector<std::size_t>(spec.K_true, per_cluster.front())
                             : per_cluster;
      const MatrixStack stack = synth_generate(spec);
      save_stack(stack, synth_out);
      std::cout << Json{{"written", synth_out}, {"N", stack.size()}, {"rows", stack.rows()},
                        {"cols", stack.cols()}}
                       .dump()
                << std::endl;
    } else if (*fit) {
      const MatrixStack stack = load_dataset(fit_data);
      const BenchConfig cfg = bench_config(fit_method, fit_data);
      MethodRun run = run_method(stack, method_from_string(method_name), fit_k, fit_seed, cfg);
      if (!run.record.ok()) {
        print_error(run.error_code ? std::string(to_string(*run.error_code)) : "RunFailed",
                    run.record.error);
        return 1;
      }
      save_model({run.record.method, cfg.dataset, fit_seed, *run.model}, model_out);
      std::cout << record_to_json(run.record).dump(2) << std::endl;
    } else if (*compare) {
      const MatrixStack stack = load_dataset(cmp_data);
      BenchConfig cfg = bench_config(cmp_method, cmp_data);
      if (workers > 0) cfg.workers = static_cast<unsigned>(workers);
      CompareRequest request;
      request.seeds = cmp_seeds;
      for (const auto& m : cmp_methods) {
        if (!m.empty()) request.methods.push_back(method_from_string(m));
      }
      request.ks = cmp_ks;
      for (double tau : cmp_taus) request.ks.push_back(reduction_ratio_to_rank(tau, stack.rows()));

      std::vector<std::optional<ClusterModel>> models;
      const Report rep = run_compare(stack, request, cfg, models_dir.empty() ? nullptr : &models);
      emit(rep, cmp_format == "csv" ? ReportFormat::Csv : ReportFormat::Json, cmp_out);
      if (!models_dir.empty()) {
        fs::create_directories(models_dir);
        for (std::size_t i = 0; i < rep.runs.size(); ++i) {
          if (!models[i]) continue;
          const auto& r = rep.runs[i];
          const auto name = r.method + "_k" + std::to_string(r.k) + "_s" + std::to_string(r.seed) +
                            ".json";
          save_model({r.method, r.dataset, r.seed, *models[i]}, fs::path(models_dir) / name);
        }
      }
      std::size_t failed = 0;
      for (const auto& r : rep.runs) failed += r.ok() ? 0 : 1;
      std::cout << Json{{"runs", rep.runs.size()}, {"failed", failed}, {"out", cmp_out}}.dump()
                << std::endl;
      if (failed > 0) {
        print_error("RunFailed", std::to_string(failed) + " run(s) failed; see the report");
        return 1;
      }
    } else if (*report) {
      const MatrixStack stack = load_dataset(rep_data);
      Json out = Json::array();
      bool all_match = true;
      for (const auto& path : model_paths) {
        const ModelFile file = load_model(path);
        const double recorded = file.model.wcssre();
        const double recomputed = wcssre(stack, file.model);
        const double rel = std::abs(recomputed - recorded) / std::max(std::abs(recorded), 1e-300);
        const bool match = recorded == recomputed || rel <= 1e-10;
        all_match = all_match && match;
        out.push_back({{"model", path},
                       {"method", file.method},
                       {"K", file.model.K},
                       {"k", file.model.k},
                       {"recorded_wcssre", recorded},
                       {"recomputed_wcssre", recomputed},
                       {"relative_difference", rel},
                       {"match", match}});
      }
      std::cout << out.dump(2) << std::endl;
      if (!all_match) {
        print_error("Mismatch", "a recomputed WCSSRE differs from its recorded value");
        return 1;
      }
    }
  } catch (const Error& e) {
    print_error(std::string(to_string(e.code())), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("Internal", e.what());
    return 1;
  }
  return 0;
}
