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

#include "checksel/model.hpp"
#include "checksel/trainer.hpp"

namespace checksel {

// Position of a parameter snapshot in the trajectory: 1-based epoch and
// minibatch.
struct CheckpointId {
  int epoch = 0;
  int batch = 0;

  friend bool operator==(const CheckpointId&, const CheckpointId&) = default;
};

std::string checkpoint_id_string(const CheckpointId& id);          // "t.i"
CheckpointId checkpoint_id_from_string(const std::string& text);

// One checkpoint's per-validation-point feature vector, kept both raw and
// unit-normalized. `raw` is stored as given; scale is its 2-norm. A zero raw
// vector yields scale 0 and usable() == false; such features are skipped by
// the selector instead of being normalized.
struct CheckpointFeature {
  CheckpointId id;
  Eigen::VectorXd raw;
  Eigen::VectorXd unit;
  double scale = 0.0;

  bool usable() const { return scale > 0.0; }

  static CheckpointFeature from_raw(CheckpointId id, Eigen::VectorXd raw);
};

// Entry j of the result is q_j + 0.5*q_j^2 with q_j = batch_grad_sum dot
// val_grads.row(j). batch_grad_sum must be the sum-reduced batch gradient at
// the pre-step snapshot; val_grads holds one validation-point gradient per
// row, taken at the same snapshot.
Eigen::VectorXd checkpoint_feature(const Eigen::VectorXd& batch_grad_sum,
                                   const Eigen::MatrixXd& val_grads);

// Row j is the gradient of validation point j's loss at `model`.
Eigen::MatrixXd val_gradient_matrix(const ModelParams& model,
                                    const Dataset& valset,
                                    EvalCounter* counter = nullptr);

// Signed elementwise change loss_after - loss_before (negative when the loss
// improves). The sign is deliberately not folded into the features; the
// selector's fitted coefficients absorb sign and scale.
Eigen::VectorXd delta_epoch(const Eigen::VectorXd& loss_before,
                            const Eigen::VectorXd& loss_after);

// Prefix sums of the per-epoch deltas.
std::vector<Eigen::VectorXd> cumulative_targets(
    const std::vector<Eigen::VectorXd>& deltas);

// Per-epoch loss changes plus their running prefix sums.
struct DeltaSeries {
  std::vector<Eigen::VectorXd> deltas;
  std::vector<Eigen::VectorXd> cumulative;

  void append(Eigen::VectorXd delta);
  const Eigen::VectorXd& latest_target() const { return cumulative.back(); }
  int size() const { return static_cast<int>(deltas.size()); }
};

// Diagnostic comparing the quadratic expansion against the realized
// per-validation-point loss change of one step. With r_j = -eta * (mean
// batch gradient dot val gradient j), predicted_j = r_j + 0.5*r_j^2; the
// remainder is second order in eta.
struct TaylorFidelity {
  Eigen::VectorXd predicted;
  Eigen::VectorXd actual;
  double gap = 0.0;  // max absolute predicted-vs-actual difference
};

TaylorFidelity taylor_fidelity(const StepRecord& step,
                               const Eigen::MatrixXd& val_grads, double eta);

}  // namespace checksel
