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

#include "checksel/features.hpp"

#include <stdexcept>

namespace checksel {

std::string checkpoint_id_string(const CheckpointId& id) {
  return std::to_string(id.epoch) + "." + std::to_string(id.batch);
}

CheckpointId checkpoint_id_from_string(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    throw std::invalid_argument("bad checkpoint id: " + text);
  }
  CheckpointId id;
  id.epoch = std::stoi(text.substr(0, dot));
  id.batch = std::stoi(text.substr(dot + 1));
  return id;
}

CheckpointFeature CheckpointFeature::from_raw(CheckpointId id,
                                              Eigen::VectorXd raw) {
  CheckpointFeature f;
  f.id = id;
  f.scale = raw.norm();
  if (f.scale > 0.0) {
    f.unit = raw / f.scale;
  } else {
    f.unit = Eigen::VectorXd::Zero(raw.size());
  }
  f.raw = std::move(raw);
  return f;
}

Eigen::VectorXd checkpoint_feature(const Eigen::VectorXd& batch_grad_sum,
                                   const Eigen::MatrixXd& val_grads) {
  if (val_grads.cols() != batch_grad_sum.size()) {
    throw std::invalid_argument(
        "val_grads columns do not match gradient length");
  }
  const Eigen::VectorXd q = val_grads * batch_grad_sum;
  return q.array() + 0.5 * q.array().square();
}

Eigen::MatrixXd val_gradient_matrix(const ModelParams& model,
                                    const Dataset& valset,
                                    EvalCounter* counter) {
  Eigen::MatrixXd out(valset.size(), model.theta.size());
  for (Eigen::Index j = 0; j < valset.size(); ++j) {
    LossGrad lg = sample_loss_grad(model, valset.features.row(j).transpose(),
                                   valset.labels[static_cast<std::size_t>(j)],
                                   counter);
    if (!lg.grad.allFinite()) {
      throw std::runtime_error("non-finite gradient at validation index " +
                               std::to_string(j));
    }
    out.row(j) = lg.grad;
  }
  return out;
}

Eigen::VectorXd delta_epoch(const Eigen::VectorXd& loss_before,
                            const Eigen::VectorXd& loss_after) {
  if (loss_before.size() != loss_after.size()) {
    throw std::invalid_argument("loss vector length mismatch");
  }
  return loss_after - loss_before;
}

std::vector<Eigen::VectorXd> cumulative_targets(
    const std::vector<Eigen::VectorXd>& deltas) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(deltas.size());
  for (const auto& d : deltas) {
    if (!out.empty() && d.size() != out.back().size()) {
      throw std::invalid_argument("delta length mismatch across epochs");
    }
    out.push_back(out.empty() ? d : Eigen::VectorXd(out.back() + d));
  }
  return out;
}

void DeltaSeries::append(Eigen::VectorXd delta) {
  if (!cumulative.empty() && delta.size() != cumulative.back().size()) {
    throw std::invalid_argument("delta length mismatch across epochs");
  }
  if (cumulative.empty()) {
    cumulative.push_back(delta);
  } else {
    cumulative.push_back(cumulative.back() + delta);
  }
  deltas.push_back(std::move(delta));
}

TaylorFidelity taylor_fidelity(const StepRecord& step,
                               const Eigen::MatrixXd& val_grads, double eta) {
  if (step.members.empty()) {
    throw std::invalid_argument("taylor_fidelity needs a non-empty batch");
  }
  const double inv_b = 1.0 / static_cast<double>(step.members.size());
  // First-order change of each validation loss under the mean-gradient
  // update, then the half-squared correction of the same quantity.
  const Eigen::VectorXd r =
      (-eta * inv_b) * (val_grads * step.batch_grad_sum);
  TaylorFidelity out;
  out.predicted = r.array() + 0.5 * r.array().square();
  out.actual = step.val_loss_after - step.val_loss_before;
  out.gap = (out.predicted - out.actual).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace checksel
