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

#include <cstdint>
#include <functional>
#include <vector>

#include "checksel/dataset.hpp"
#include "checksel/model.hpp"

namespace checksel {

struct TrainRunConfig {
  int epochs = 1;
  int batch_size = 1;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
  bool shuffle = true;

  void validate() const;
};

// Ordered minibatches for every epoch. Each epoch's batches partition
// {0..N-1}; membership per (epoch, batch) stays retrievable after training.
// Epoch and batch positions are 1-based to match checkpoint ids; data
// indices inside a batch are 0-based.
struct MinibatchSchedule {
  int num_points = 0;
  std::vector<std::vector<std::vector<int>>> epochs;  // [epoch][batch] -> ids

  int num_epochs() const { return static_cast<int>(epochs.size()); }
  int batches_per_epoch() const {
    return epochs.empty() ? 0 : static_cast<int>(epochs.front().size());
  }
  const std::vector<int>& batch(int epoch1, int batch1) const;

  // Checks the partition property for every epoch.
  void validate() const;

  // FNV-1a over the full index structure; recorded in run manifests.
  std::uint64_t digest() const;
};

// When shuffle is set, each epoch reshuffles from a seed derived from
// (seed, epoch); otherwise every epoch walks 0..N-1 in order.
MinibatchSchedule make_schedule(int num_points, int batch_size, int num_epochs,
                                std::uint64_t seed, bool shuffle);

// Everything the online feature computation needs about one SGD step.
// theta_before is the pre-step snapshot; batch_grad_sum is the sum-reduced
// batch gradient at theta_before (the update itself uses its mean).
struct StepRecord {
  int epoch = 0;  // 1-based
  int batch = 0;  // 1-based
  std::vector<int> members;
  Eigen::VectorXd theta_before;
  Eigen::VectorXd batch_grad_sum;
  Eigen::VectorXd val_loss_before;
  Eigen::VectorXd val_loss_after;
};

using StepHook = std::function<void(const StepRecord&)>;
using EpochEndHook = std::function<void(int epoch, const ModelParams& params,
                                        const Eigen::VectorXd& val_loss)>;

struct TrainResult {
  ModelParams params;
  Eigen::VectorXd initial_val_loss;
  std::vector<Eigen::VectorXd> epoch_val_loss;  // entry t-1 is end of epoch t
};

// Runs config.epochs of minibatch SGD over the schedule, invoking step_hook
// once per (epoch, batch) in order and epoch_hook (optional) at each epoch
// end. Hook exceptions abort training wrapped with the (epoch, batch)
// context. Training is strictly sequential.
TrainResult train_with_hooks(const Dataset& train, const Dataset& valset,
                             const TrainRunConfig& config,
                             const MinibatchSchedule& schedule,
                             const ModelParams& init,
                             const StepHook& step_hook = {},
                             const EpochEndHook& epoch_hook = {});

}  // namespace checksel
