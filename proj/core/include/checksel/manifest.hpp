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

#include "checksel/trainer.hpp"
#include "checksel/valuation.hpp"

namespace checksel {

enum class SelectionMode { kChecksel, kUniform, kLossGap };

const char* selection_mode_name(SelectionMode mode);
SelectionMode selection_mode_from_name(const std::string& name);

struct EpochSnapshot {
  int epoch = 0;  // 1-based end-of-epoch position
  Eigen::VectorXd theta;
};

// Self-describing record of one training run. Valuation and subset
// selection run from the manifest plus the referenced dataset files alone;
// nothing needs retraining.
struct RunManifest {
  SelectionMode mode = SelectionMode::kChecksel;
  ModelKind model_kind = ModelKind::kLogistic;
  ModelShape shape;
  TrainRunConfig config;
  std::string train_path;
  std::string val_path;
  std::uint64_t schedule_digest = 0;

  Eigen::VectorXd initial_val_loss;
  std::vector<Eigen::VectorXd> epoch_val_loss;
  Eigen::VectorXd final_theta;

  // checksel mode
  std::vector<SelectedCheckpoint> selected;
  std::vector<double> residual_curve;  // one entry per epoch

  // uniform / loss-gap modes
  std::vector<EpochSnapshot> epoch_snapshots;

  void save(const std::string& path) const;
  static RunManifest load(const std::string& path);
};

}  // namespace checksel
