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

#include "checksel/trainer.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "checksel/rng.hpp"

namespace checksel {

void TrainRunConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (learning_rate <= 0.0) {
    throw std::invalid_argument("learning_rate must be > 0");
  }
}

const std::vector<int>& MinibatchSchedule::batch(int epoch1, int batch1) const {
  return epochs.at(static_cast<std::size_t>(epoch1 - 1))
      .at(static_cast<std::size_t>(batch1 - 1));
}

void MinibatchSchedule::validate() const {
  for (std::size_t e = 0; e < epochs.size(); ++e) {
    std::vector<bool> seen(static_cast<std::size_t>(num_points), false);
    std::size_t total = 0;
    for (const auto& b : epochs[e]) {
      for (int i : b) {
        if (i < 0 || i >= num_points) {
          throw std::invalid_argument("schedule index out of range");
        }
        if (seen[static_cast<std::size_t>(i)]) {
          throw std::invalid_argument(
              "schedule epoch " + std::to_string(e + 1) +
              " repeats index " + std::to_string(i));
        }
        seen[static_cast<std::size_t>(i)] = true;
        ++total;
      }
    }
    if (total != static_cast<std::size_t>(num_points)) {
      throw std::invalid_argument("schedule epoch " + std::to_string(e + 1) +
                                  " does not cover all indices");
    }
  }
}

std::uint64_t MinibatchSchedule::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffULL;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(num_points));
  for (const auto& epoch : epochs) {
    mix(0xe0e0e0e0ULL);
    for (const auto& batch : epoch) {
      mix(0xb0b0b0b0ULL);
      for (int i : batch) mix(static_cast<std::uint64_t>(i));
    }
  }
  return h;
}

MinibatchSchedule make_schedule(int num_points, int batch_size, int num_epochs,
                                std::uint64_t seed, bool shuffle) {
  if (num_points < 1 || batch_size < 1 || num_epochs < 1) {
    throw std::invalid_argument("make_schedule requires positive sizes");
  }
  MinibatchSchedule s;
  s.num_points = num_points;
  s.epochs.resize(static_cast<std::size_t>(num_epochs));
  std::vector<int> order(static_cast<std::size_t>(num_points));
  for (int e = 0; e < num_epochs; ++e) {
    std::iota(order.begin(), order.end(), 0);
    if (shuffle) {
      Rng rng(mix_seed(seed, 0x5c4edu + static_cast<std::uint64_t>(e)));
      rng.shuffle(order);
    }
    auto& batches = s.epochs[static_cast<std::size_t>(e)];
    for (int start = 0; start < num_points; start += batch_size) {
      const int end = std::min(start + batch_size, num_points);
      batches.emplace_back(order.begin() + start, order.begin() + end);
    }
  }
  return s;
}

TrainResult train_with_hooks(const Dataset& train, const Dataset& valset,
                             const TrainRunConfig& config,
                             const MinibatchSchedule& schedule,
                             const ModelParams& init,
                             const StepHook& step_hook,
                             const EpochEndHook& epoch_hook) {
  config.validate();
  train.validate();
  valset.validate();
  init.validate();
  if (schedule.num_points != train.size()) {
    throw std::invalid_argument("schedule size does not match dataset");
  }
  if (schedule.num_epochs() != config.epochs) {
    throw std::invalid_argument("schedule epochs do not match config");
  }

  TrainResult result;
  result.params = init;
  result.initial_val_loss = validation_loss_vector(init, valset);

  Eigen::VectorXd val_before = result.initial_val_loss;
  for (int t = 1; t <= config.epochs; ++t) {
    const auto& batches = schedule.epochs[static_cast<std::size_t>(t - 1)];
    for (int i = 1; i <= static_cast<int>(batches.size()); ++i) {
      const auto& members = batches[static_cast<std::size_t>(i - 1)];
      LossGrad sum =
          loss_and_grad(result.params, members, train, Reduction::kSum);

      // Materialized so the arithmetic matches sgd_step bit for bit.
      const Eigen::VectorXd mean_grad =
          sum.grad * (1.0 / static_cast<double>(members.size()));
      ModelParams next = result.params;
      next.theta = result.params.theta - config.learning_rate * mean_grad;

      StepRecord record;
      record.epoch = t;
      record.batch = i;
      record.members = members;
      record.theta_before = result.params.theta;
      record.batch_grad_sum = std::move(sum.grad);
      record.val_loss_before = val_before;
      record.val_loss_after = validation_loss_vector(next, valset);

      if (step_hook) {
        try {
          step_hook(record);
        } catch (const std::exception& e) {
          throw std::runtime_error("step hook failed at epoch " +
                                   std::to_string(t) + " batch " +
                                   std::to_string(i) + ": " + e.what());
        }
      }

      val_before = record.val_loss_after;
      result.params = std::move(next);
    }
    result.epoch_val_loss.push_back(val_before);
    if (epoch_hook) {
      try {
        epoch_hook(t, result.params, val_before);
      } catch (const std::exception& e) {
        throw std::runtime_error("epoch hook failed at epoch " +
                                 std::to_string(t) + ": " + e.what());
      }
    }
  }
  return result;
}

}  // namespace checksel
