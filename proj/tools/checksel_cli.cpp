// Copyright 2026 The CheckSel Authors.
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

// Pipeline driver: data generation, training with online checkpoint
// selection, valuation, subset selection, and the two comparison reports.
// Every verb is a thin shell over the library functions in
// checksel/pipeline.hpp.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "checksel/pipeline.hpp"

namespace {

// Relative output paths land under --out-dir; inputs are taken as given.
std::string in_out_dir(const std::string& out_dir, const std::string& path) {
  if (path.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(out_dir) / path).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CheckSel: checkpoint selection and training-data valuation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Config file (key=value lines)");

  std::uint64_t seed = 42;
  std::string out_dir = ".";
  app.add_option("--seed", seed, "Base seed for all derived randomness")
      ->capture_default_str();
  app.add_option("--out-dir", out_dir, "Directory for output files")
      ->capture_default_str();

  // gen-data
  auto* gen = app.add_subcommand("gen-data",
                                 "Generate a Gaussian-mixture corpus");
  checksel::GenDataOptions gen_opt;
  gen->add_option("--classes", gen_opt.num_classes, "Number of classes")
      ->capture_default_str();
  gen->add_option("--components", gen_opt.components_per_class,
                  "Gaussian components per class")
      ->capture_default_str();
  gen->add_option("--n", gen_opt.train_count, "Training points")->required();
  gen->add_option("--val-n", gen_opt.val_count,
                  "Validation points (default n/5)");
  gen->add_option("--test-n", gen_opt.test_count, "Test points (default n/5)");
  gen->add_option("--d", gen_opt.dim, "Feature dimension")
      ->capture_default_str();
  gen->add_option("--noise", gen_opt.label_noise,
                  "Symmetric label-noise rate on the training split")
      ->capture_default_str();
  gen->add_option("--class-sep", gen_opt.class_sep,
                  "Norm of the class centers")
      ->capture_default_str();
  gen->add_option("--feature-scale", gen_opt.feature_scale,
                  "Uniform feature scaling (conditions gradient sizes)")
      ->capture_default_str();
  gen->add_option("--format", gen_opt.format, "csv or raw")
      ->capture_default_str();
  gen->add_option("--basename", gen_opt.basename, "Output file stem")
      ->capture_default_str();

  // train
  auto* train = app.add_subcommand(
      "train", "Train with minibatch SGD and select checkpoints");
  checksel::TrainOptions train_opt;
  std::string train_mode = "checksel";
  std::string train_model = "logistic";
  train->add_option("--train", train_opt.train_path, "Training dataset")
      ->required();
  train->add_option("--val", train_opt.val_path, "Validation dataset")
      ->required();
  train->add_option("--mode", train_mode, "checksel | uniform | loss-gap")
      ->capture_default_str();
  train->add_option("--k", train_opt.budget, "Checkpoint budget")->required();
  train->add_option("--model", train_model, "logistic | mlp")
      ->capture_default_str();
  train->add_option("--hidden", train_opt.hidden, "MLP hidden width")
      ->capture_default_str();
  train->add_option("--epochs", train_opt.config.epochs, "Epochs")
      ->capture_default_str();
  train->add_option("--batch-size", train_opt.config.batch_size,
                    "Minibatch size")
      ->capture_default_str();
  train->add_option("--lr", train_opt.config.learning_rate, "Learning rate")
      ->capture_default_str();
  bool no_shuffle = false;
  train->add_flag("--no-shuffle", no_shuffle,
                  "Keep the index order fixed across epochs");
  std::string manifest_out = "manifest.json";
  train->add_option("--manifest", manifest_out, "Manifest output path")
      ->capture_default_str();
  std::string data_map_out;
  train->add_option("--data-map", data_map_out,
                    "Write a confidence/loss data-map CSV");
  std::string feature_dump_out;
  train->add_option("--dump-features", feature_dump_out,
                    "Write one JSON line per checkpoint feature");

  // value
  auto* value = app.add_subcommand("value",
                                   "Score training points from a manifest");
  checksel::ValueOptions value_opt;
  value->add_option("--manifest", value_opt.manifest_path, "Run manifest")
      ->required();
  value->add_option("--method", value_opt.method, "checksel | tracin")
      ->capture_default_str();
  value->add_option("--train", value_opt.train_path_override,
                    "Override the manifest's training dataset");
  value->add_option("--val", value_opt.val_path_override,
                    "Override the manifest's validation dataset");
  std::string values_out = "values.csv";
  value->add_option("--out", values_out, "Values CSV output")
      ->capture_default_str();
  std::string contribs_out;
  value->add_option("--contribs", contribs_out,
                    "Write direct contrib vectors (needed for simsel)");

  // select
  auto* select = app.add_subcommand("select", "Choose a training subset");
  checksel::SelectOptions select_opt;
  select->add_option("--values", select_opt.values_path, "Values CSV")
      ->required();
  select->add_option("--contribs", select_opt.contribs_path,
                     "Contrib vectors (required for simsel)");
  select->add_option("--f", select_opt.subset_size, "Subset size")->required();
  select->add_option("--mode", select_opt.mode, "top | simsel")
      ->capture_default_str();
  select->add_option("--stream-batch", select_opt.stream_batch,
                     "Streaming window batch size (default 2*f)");
  select->add_option("--pool", select_opt.pool,
                     "Stream only the pool highest-valued candidates "
                     "(0 = all)");
  std::string subset_out = "subset.txt";
  select->add_option("--out", subset_out, "Subset output path")
      ->capture_default_str();

  // retrain-report
  auto* retrain = app.add_subcommand(
      "retrain-report", "Retrain on a subset and compare with random");
  checksel::RetrainOptions retrain_opt;
  std::string retrain_model = "logistic";
  retrain->add_option("--subset", retrain_opt.subset_path, "Subset file")
      ->required();
  retrain->add_option("--train", retrain_opt.train_path, "Training dataset")
      ->required();
  retrain->add_option("--test", retrain_opt.test_path, "Test dataset")
      ->required();
  retrain->add_option("--model", retrain_model, "logistic | mlp")
      ->capture_default_str();
  retrain->add_option("--hidden", retrain_opt.hidden, "MLP hidden width")
      ->capture_default_str();
  retrain->add_option("--epochs", retrain_opt.config.epochs, "Epochs")
      ->capture_default_str();
  retrain->add_option("--batch-size", retrain_opt.config.batch_size,
                      "Minibatch size")
      ->capture_default_str();
  retrain->add_option("--lr", retrain_opt.config.learning_rate,
                      "Learning rate")
      ->capture_default_str();
  retrain->add_option("--controls", retrain_opt.control_draws,
                      "Random control draws (>= 5 recommended)")
      ->capture_default_str();
  std::string retrain_out = "retrain_report.csv";
  retrain->add_option("--out", retrain_out, "Report output path")
      ->capture_default_str();

  // residual-report
  auto* residual = app.add_subcommand(
      "residual-report", "Per-epoch normalized residuals across manifests");
  checksel::ResidualReportOptions residual_opt;
  residual->add_option("--manifests", residual_opt.manifest_paths,
                       "Manifests sharing data, config, and seed")
      ->required()
      ->expected(1, 8);
  std::string residual_out = "residual_report.csv";
  residual->add_option("--out", residual_out, "Report output path")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(out_dir);
    if (*gen) {
      gen_opt.seed = seed;
      gen_opt.out_dir = out_dir;
      const auto result = checksel::gen_data(gen_opt);
      std::cout << "train=" << result.train_path << '\n'
                << "val=" << result.val_path << '\n'
                << "test=" << result.test_path << '\n';
    } else if (*train) {
      train_opt.mode = checksel::selection_mode_from_name(train_mode);
      train_opt.model_kind = checksel::model_kind_from_name(train_model);
      train_opt.config.seed = seed;
      train_opt.config.shuffle = !no_shuffle;
      train_opt.manifest_path = in_out_dir(out_dir, manifest_out);
      train_opt.data_map_path = in_out_dir(out_dir, data_map_out);
      train_opt.feature_dump_path = in_out_dir(out_dir, feature_dump_out);
      const auto manifest = checksel::train_run(train_opt);
      std::cout << "manifest=" << train_opt.manifest_path << '\n'
                << "mode=" << checksel::selection_mode_name(manifest.mode)
                << '\n';
      if (!manifest.residual_curve.empty()) {
        std::cout << "final_residual="
                  << checksel::format_double(manifest.residual_curve.back())
                  << '\n';
      }
    } else if (*value) {
      value_opt.values_path = in_out_dir(out_dir, values_out);
      value_opt.contribs_path = in_out_dir(out_dir, contribs_out);
      const auto result = checksel::value_run(value_opt);
      std::cout << "values=" << value_opt.values_path << '\n'
                << "direct=" << result.direct_count << '\n'
                << "propagated=" << result.propagated_count << '\n'
                << "grad_evals=" << result.grad_evals << '\n';
    } else if (*select) {
      select_opt.subset_path = in_out_dir(out_dir, subset_out);
      const auto result = checksel::select_run(select_opt);
      std::cout << "subset=" << select_opt.subset_path << '\n'
                << "selected=" << result.selected.size() << '\n'
                << "objective=" << checksel::format_double(result.objective)
                << '\n';
    } else if (*retrain) {
      retrain_opt.model_kind = checksel::model_kind_from_name(retrain_model);
      retrain_opt.config.seed = seed;
      retrain_opt.report_path = in_out_dir(out_dir, retrain_out);
      const auto report = checksel::retrain_report(retrain_opt);
      std::cout << "report=" << retrain_opt.report_path << '\n'
                << "subset_accuracy="
                << checksel::format_double(report.subset_accuracy) << '\n'
                << "control_mean="
                << checksel::format_double(report.control_mean) << '\n';
    } else if (*residual) {
      residual_opt.report_path = in_out_dir(out_dir, residual_out);
      const auto report = checksel::residual_report(residual_opt);
      std::cout << "report=" << residual_opt.report_path << '\n';
      for (std::size_t m = 0; m < report.modes.size(); ++m) {
        std::cout << report.modes[m] << "_final="
                  << checksel::format_double(report.curves[m].back()) << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
