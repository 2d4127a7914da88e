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

#include <vector>

#include "checksel/features.hpp"
#include "checksel/model.hpp"

namespace checksel {

// A checkpoint retained by the selector together with everything valuation
// needs to rescore its minibatch: fitted coefficient, feature scale, the
// unit feature itself, the batch membership, and the pre-step parameter
// snapshot.
struct SelectedCheckpoint {
  CheckpointId id;
  double alpha = 0.0;
  double scale = 0.0;
  Eigen::VectorXd unit_feature;
  std::vector<int> batch_members;
  Eigen::VectorXd snapshot;  // theta before the checkpoint's step
};

struct ValueRecord {
  enum class Source { kDirect, kPropagated };

  int index = -1;
  double value = 0.0;
  Source source = Source::kDirect;
  int from_index = -1;     // propagated: index of the direct record copied
  double epsilon = 0.0;    // propagated: embedding distance to from_index
  std::vector<CheckpointId> owners;  // direct: checkpoints that scored it
};

struct ContribVector {
  int index = -1;
  Eigen::VectorXd contrib;  // one entry per validation point
};

// Per-sample analogue of the checkpoint feature: entry j is q_j + 0.5*q_j^2
// with q_j the dot product of the sample gradient and validation gradient j,
// both at the snapshot. Sum and mean reductions coincide for one sample.
Eigen::VectorXd per_sample_feature(const ModelParams& snapshot,
                                   const Eigen::VectorXd& x, int y,
                                   const Dataset& valset,
                                   EvalCounter* counter = nullptr);

struct ValuationResult {
  std::vector<ValueRecord> records;      // direct only, sorted by index
  std::vector<ContribVector> contribs;   // aligned with records
};

// Direct values for every member of every selected checkpoint's batch:
// contrib(z) accumulates (alpha_j / |B_j|) * per_sample_feature(z) over the
// selected checkpoints owning z, and the value is the contrib sum. Points
// in several selected batches accumulate. Throws when a checkpoint is
// missing its snapshot, naming the checkpoint id.
ValuationResult value_scores(const std::vector<SelectedCheckpoint>& selected,
                             ModelKind kind, const ModelShape& shape,
                             const Dataset& train, const Dataset& valset,
                             EvalCounter* counter = nullptr);

// Fills in every training index without a direct record by copying the
// value of its nearest direct record in embedding space (Euclidean; ties go
// to the smallest training index). Direct records pass through untouched.
// Returns one record per training index, sorted.
std::vector<ValueRecord> propagate_values(
    const std::vector<ValueRecord>& direct,
    const Eigen::MatrixXd& embeddings);

// TracIn baseline: value(z) = sum_t eta_t * g_t(z) . (sum_j g_t(z'_j)) over
// the provided end-of-epoch snapshots. Gradient evaluations per snapshot:
// one per training point plus one per validation point.
Eigen::VectorXd tracin_scores(
    const std::vector<std::pair<int, Eigen::VectorXd>>& epoch_snapshots,
    const std::vector<double>& etas, ModelKind kind, const ModelShape& shape,
    const Dataset& train, const Dataset& valset,
    EvalCounter* counter = nullptr);

// Data-map statistics across end-of-epoch snapshots: mean true-class
// probability and mean cross-entropy loss per training point.
struct ConfidenceMap {
  Eigen::VectorXd confidence;  // in [0, 1]
  Eigen::VectorXd mean_loss;
};

ConfidenceMap confidence_map(
    const std::vector<std::pair<int, Eigen::VectorXd>>& epoch_snapshots,
    ModelKind kind, const ModelShape& shape, const Dataset& train);

}  // namespace checksel
