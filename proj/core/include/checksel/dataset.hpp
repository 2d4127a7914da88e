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

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace checksel {

enum class SplitTag { kTrain, kValidation };

// Feature matrix plus integer class labels. Rows are datapoints; indices into
// a Dataset are 0-based everywhere.
struct Dataset {
  Eigen::MatrixXd features;  // N x d
  std::vector<int> labels;   // length N, values in [0, num_classes)
  SplitTag split = SplitTag::kTrain;
  int num_classes = 0;

  Eigen::Index size() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }

  // Throws std::invalid_argument when an invariant is broken: empty matrix,
  // label/feature count mismatch, label out of range, non-finite feature.
  void validate() const;
};

int infer_num_classes(const std::vector<int>& labels);

// Dataset restricted to `indices` (rows copied in the given order).
Dataset subset_of(const Dataset& data, const std::vector<int>& indices);

}  // namespace checksel
