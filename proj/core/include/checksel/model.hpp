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
#include <string>
#include <vector>

#include "checksel/dataset.hpp"

namespace checksel {

// Two small analytic models with exact closed-form gradients:
//   kLogistic: softmax over a bias-free linear layer, theta = vec(W), W is
//              num_classes x d, row-major by class.
//   kMlp:      one tanh hidden layer, both layers bias-free,
//              theta = [vec(W1) | vec(W2)], W1 is hidden x d, W2 is
//              num_classes x hidden, each row-major.
enum class ModelKind { kLogistic, kMlp };

struct ModelShape {
  Eigen::Index input_dim = 0;
  Eigen::Index hidden = 0;  // ignored for kLogistic
  int num_classes = 0;
};

Eigen::Index param_count(ModelKind kind, const ModelShape& shape);

struct ModelParams {
  ModelKind kind = ModelKind::kLogistic;
  ModelShape shape;
  Eigen::VectorXd theta;

  void validate() const;
};

// Seeded normal init, scaled by 1/sqrt(fan_in) per layer.
ModelParams init_params(ModelKind kind, const ModelShape& shape,
                        std::uint64_t seed);

enum class Reduction { kSum, kMean };

struct LossGrad {
  double loss = 0.0;
  Eigen::VectorXd grad;
};

// Counts single-sample gradient evaluations. Threaded through the valuation
// paths so reported costs are actual call counts, not estimates.
struct EvalCounter {
  std::uint64_t sample_grad_evals = 0;
};

// Softmax probabilities for one input.
Eigen::VectorXd sample_class_probs(const ModelParams& model,
                                   const Eigen::VectorXd& x);

// Cross-entropy loss of a single sample (clamped at 0 from below).
double sample_loss(const ModelParams& model, const Eigen::VectorXd& x, int y);

// Loss plus exact analytic gradient for one sample.
LossGrad sample_loss_grad(const ModelParams& model, const Eigen::VectorXd& x,
                          int y, EvalCounter* counter = nullptr);

// Cross-entropy over a batch of dataset rows. kSum follows the total-loss
// convention used by the checkpoint features; kMean is the SGD convention.
// The two gradients differ exactly by the batch-size factor. An empty batch
// yields loss 0 and a zero gradient for either reduction.
// Throws std::runtime_error naming the sample index if a non-finite value
// shows up.
LossGrad loss_and_grad(const ModelParams& model, const std::vector<int>& batch,
                       const Dataset& data, Reduction reduction,
                       EvalCounter* counter = nullptr);

// theta' = theta - eta * grad(mean batch loss). Input untouched.
ModelParams sgd_step(const ModelParams& model, const std::vector<int>& batch,
                     const Dataset& data, double eta,
                     EvalCounter* counter = nullptr);

// Entry j is the loss of validation point j under `model`.
Eigen::VectorXd validation_loss_vector(const ModelParams& model,
                                       const Dataset& valset);

// Hidden-layer activations for the MLP; the raw input for logistic
// regression (the model has no hidden layer, so the input is the only
// pre-logit representation).
Eigen::VectorXd penultimate_embedding(const ModelParams& model,
                                      const Eigen::VectorXd& x);

// Row i is penultimate_embedding of data row i.
Eigen::MatrixXd embedding_matrix(const ModelParams& model,
                                 const Dataset& data);

double accuracy(const ModelParams& model, const Dataset& data);

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

}  // namespace checksel
