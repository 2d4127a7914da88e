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

#include "checksel/dataset.hpp"

#include <stdexcept>

namespace checksel {

void Dataset::validate() const {
  if (features.rows() < 1 || features.cols() < 1) {
    throw std::invalid_argument("dataset must have N >= 1 and d >= 1");
  }
  if (static_cast<Eigen::Index>(labels.size()) != features.rows()) {
    throw std::invalid_argument("label count does not match feature rows");
  }
  if (num_classes < 1) {
    throw std::invalid_argument("dataset num_classes must be >= 1");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw std::invalid_argument("label out of range at index " +
                                  std::to_string(i));
    }
  }
  if (!features.allFinite()) {
    throw std::invalid_argument("feature matrix contains non-finite values");
  }
}

int infer_num_classes(const std::vector<int>& labels) {
  int max_label = -1;
  for (int y : labels) max_label = std::max(max_label, y);
  return max_label + 1;
}

Dataset subset_of(const Dataset& data, const std::vector<int>& indices) {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(indices.size()), data.dim());
  out.labels.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const int i = indices[r];
    if (i < 0 || i >= data.size()) {
      throw std::invalid_argument("subset index out of range: " +
                                  std::to_string(i));
    }
    out.features.row(static_cast<Eigen::Index>(r)) = data.features.row(i);
    out.labels.push_back(data.labels[static_cast<std::size_t>(i)]);
  }
  out.split = data.split;
  out.num_classes = data.num_classes;
  return out;
}

}  // namespace checksel
