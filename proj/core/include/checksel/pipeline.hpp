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

#pragma once

#include <string>
#include <vector>

#include "checksel/dataset_io.hpp"
#include "checksel/manifest.hpp"

namespace checksel {

// Library-level implementations of the CLI verbs. The CLI binary is a thin
// argument-parsing shell over these, so integration tests can drive the
// pipeline in-process.

struct GenDataOptions {
  int num_classes = 2;
  int components_per_class = 1;
  int train_count = 0;
  int val_count = 0;   // 0: train_count / 5, at least 1
  int test_count = 0;  // 0: train_count / 5, at least 1
  Eigen::Index dim = 2;
  double label_noise = 0.0;  // applied to the training split only
  double class_sep = 4.0;
  double feature_scale = 1.0;  // conditions gradient magnitudes
  std::uint64_t seed = 0;
  std::string format = "csv";  // csv | raw
  std::string out_dir = ".";
  std::string basename = "mixture";
};

struct GenDataResult {
  std::string train_path;
  std::string val_path;
  std::string test_path;
};

GenDataResult gen_data(const GenDataOptions& options);

struct TrainOptions {
  std::string train_path;
  std::string val_path;
  SelectionMode mode = SelectionMode::kChecksel;
  int budget = 1;  // k
  ModelKind model_kind = ModelKind::kLogistic;
  Eigen::Index hidden = 8;
  TrainRunConfig config;
  std::string manifest_path;
  std::string data_map_path;      // optional confidence/loss table
  std::string feature_dump_path;  // optional JSONL of checkpoint features
};

RunManifest train_run(const TrainOptions& options);

struct ValueOptions {
  std::string manifest_path;
  std::string method = "checksel";  // checksel | tracin
  std::string train_path_override;  // optional
  std::string val_path_override;    // optional (cross-domain valuation)
  std::string values_path;
  std::string contribs_path;  // optional dump of direct contrib vectors
};

struct ValueRunResult {
  std::vector<ValueRecord> records;
  std::size_t direct_count = 0;
  std::size_t propagated_count = 0;
  std::uint64_t grad_evals = 0;
};

ValueRunResult value_run(const ValueOptions& options);

struct SelectOptions {
  std::string values_path;
  std::string contribs_path;  // required for simsel mode
  int subset_size = 0;        // f
  std::string mode = "top";   // top | simsel
  int stream_batch = 0;       // 0: 2 * subset_size
  // simsel candidate pool: stream only the `pool` highest-valued scored
  // points (0 streams everything). Diversifying inside the worthy pool is
  // the useful regime when f is small relative to the dataset.
  int pool = 0;
  std::string subset_path;
};

SubsetResult select_run(const SelectOptions& options);

struct RetrainOptions {
  std::string subset_path;
  std::string train_path;
  std::string test_path;
  ModelKind model_kind = ModelKind::kLogistic;
  Eigen::Index hidden = 8;
  TrainRunConfig config;
  int control_draws = 5;
  std::string report_path;
};

struct RetrainReport {
  std::size_t subset_size = 0;
  double subset_accuracy = 0.0;
  double control_mean = 0.0;
  std::vector<double> control_accuracies;
};

RetrainReport retrain_report(const RetrainOptions& options);

struct ResidualReportOptions {
  std::vector<std::string> manifest_paths;
  std::string report_path;
};

struct ResidualReport {
  std::vector<std::string> modes;
  std::vector<std::vector<double>> curves;  // curves[m][t-1], epochs 1..T
};

// Per-epoch normalized residuals for each manifest. The checksel curve is
// the one recorded online by the selector; uniform and loss-gap curves use
// the first-order full-data estimate accumulated over each mode's selected
// end-of-epoch snapshots available by epoch t. All manifests must share
// data, config, and seed.
ResidualReport residual_report(const ResidualReportOptions& options);

// Epochs chosen by uniform spacing: floor(j * epochs / k) for j = 1..k.
std::vector<int> uniform_checkpoint_epochs(int epochs, int k);

}  // namespace checksel
