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

#include "checksel/model.hpp"

#include <cmath>
#include <stdexcept>

#include "checksel/rng.hpp"

namespace checksel {

namespace {

using RowMajorMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                   Eigen::Dynamic,
                                                   Eigen::RowMajor>>;

RowMajorMap logistic_weights(const ModelParams& m) {
  return RowMajorMap(m.theta.data(), m.shape.num_classes, m.shape.input_dim);
}

RowMajorMap mlp_hidden_weights(const ModelParams& m) {
  return RowMajorMap(m.theta.data(), m.shape.hidden, m.shape.input_dim);
}

RowMajorMap mlp_output_weights(const ModelParams& m) {
  return RowMajorMap(m.theta.data() + m.shape.hidden * m.shape.input_dim,
                     m.shape.num_classes, m.shape.hidden);
}

struct SoftmaxCe {
  double loss = 0.0;
  Eigen::VectorXd probs;
};

// Max-subtracted softmax; loss clamped at 0 from below.
SoftmaxCe softmax_cross_entropy(const Eigen::VectorXd& logits, int y) {
  SoftmaxCe out;
  const double zmax = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - zmax).exp();
  const double s = e.sum();
  out.probs = e / s;
  out.loss = std::max(0.0, std::log(s) + zmax - logits[y]);
  return out;
}

Eigen::VectorXd logits_of(const ModelParams& m, const Eigen::VectorXd& x) {
  if (m.kind == ModelKind::kLogistic) {
    return logistic_weights(m) * x;
  }
  const Eigen::VectorXd h = (mlp_hidden_weights(m) * x).array().tanh();
  return mlp_output_weights(m) * h;
}

void check_label(const ModelParams& m, int y) {
  if (y < 0 || y >= m.shape.num_classes) {
    throw std::invalid_argument("label out of range for model: " +
                                std::to_string(y));
  }
}

}  // namespace

Eigen::Index param_count(ModelKind kind, const ModelShape& shape) {
  if (kind == ModelKind::kLogistic) {
    return static_cast<Eigen::Index>(shape.num_classes) * shape.input_dim;
  }
  return shape.hidden * shape.input_dim +
         static_cast<Eigen::Index>(shape.num_classes) * shape.hidden;
}

void ModelParams::validate() const {
  if (shape.input_dim < 1 || shape.num_classes < 2) {
    throw std::invalid_argument("model shape requires d >= 1, classes >= 2");
  }
  if (kind == ModelKind::kMlp && shape.hidden < 1) {
    throw std::invalid_argument("MLP requires hidden width >= 1");
  }
  if (theta.size() != param_count(kind, shape)) {
    throw std::invalid_argument("theta length does not match model shape");
  }
  if (!theta.allFinite()) {
    throw std::invalid_argument("theta contains non-finite values");
  }
}

ModelParams init_params(ModelKind kind, const ModelShape& shape,
                        std::uint64_t seed) {
  ModelParams m;
  m.kind = kind;
  m.shape = shape;
  m.theta.resize(param_count(kind, shape));
  Rng rng(seed);
  if (kind == ModelKind::kLogistic) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(shape.input_dim));
    for (Eigen::Index i = 0; i < m.theta.size(); ++i) {
      m.theta[i] = scale * rng.normal();
    }
  } else {
    const Eigen::Index n1 = shape.hidden * shape.input_dim;
    const double s1 = 1.0 / std::sqrt(static_cast<double>(shape.input_dim));
    const double s2 = 1.0 / std::sqrt(static_cast<double>(shape.hidden));
    for (Eigen::Index i = 0; i < m.theta.size(); ++i) {
      m.theta[i] = (i < n1 ? s1 : s2) * rng.normal();
    }
  }
  m.validate();
  return m;
}

Eigen::VectorXd sample_class_probs(const ModelParams& model,
                                   const Eigen::VectorXd& x) {
  return softmax_cross_entropy(logits_of(model, x), 0).probs;
}

double sample_loss(const ModelParams& model, const Eigen::VectorXd& x, int y) {
  check_label(model, y);
  return softmax_cross_entropy(logits_of(model, x), y).loss;
}

LossGrad sample_loss_grad(const ModelParams& model, const Eigen::VectorXd& x,
                          int y, EvalCounter* counter) {
  check_label(model, y);
  if (counter != nullptr) ++counter->sample_grad_evals;

  LossGrad out;
  out.grad = Eigen::VectorXd::Zero(model.theta.size());

  if (model.kind == ModelKind::kLogistic) {
    auto ce = softmax_cross_entropy(logistic_weights(model) * x, y);
    out.loss = ce.loss;
    Eigen::VectorXd dz = ce.probs;
    dz[y] -= 1.0;
    const Eigen::Index d = model.shape.input_dim;
    for (int c = 0; c < model.shape.num_classes; ++c) {
      out.grad.segment(c * d, d) = dz[c] * x;
    }
    return out;
  }

  const auto w1 = mlp_hidden_weights(model);
  const auto w2 = mlp_output_weights(model);
  const Eigen::VectorXd h = (w1 * x).array().tanh();
  auto ce = softmax_cross_entropy(w2 * h, y);
  out.loss = ce.loss;

  Eigen::VectorXd dz = ce.probs;
  dz[y] -= 1.0;
  const Eigen::VectorXd dh = w2.transpose() * dz;
  const Eigen::VectorXd da = dh.array() * (1.0 - h.array().square());

  const Eigen::Index d = model.shape.input_dim;
  const Eigen::Index hd = model.shape.hidden;
  for (Eigen::Index r = 0; r < hd; ++r) {
    out.grad.segment(r * d, d) = da[r] * x;
  }
  const Eigen::Index off = hd * d;
  for (int c = 0; c < model.shape.num_classes; ++c) {
    out.grad.segment(off + c * hd, hd) = dz[c] * h;
  }
  return out;
}

LossGrad loss_and_grad(const ModelParams& model, const std::vector<int>& batch,
                       const Dataset& data, Reduction reduction,
                       EvalCounter* counter) {
  LossGrad acc;
  acc.grad = Eigen::VectorXd::Zero(model.theta.size());
  for (int i : batch) {
    if (i < 0 || i >= data.size()) {
      throw std::invalid_argument("batch index out of range: " +
                                  std::to_string(i));
    }
    LossGrad one = sample_loss_grad(model, data.features.row(i).transpose(),
                                    data.labels[static_cast<std::size_t>(i)],
                                    counter);
    if (!std::isfinite(one.loss) || !one.grad.allFinite()) {
      throw std::runtime_error("non-finite loss/gradient at sample index " +
                               std::to_string(i));
    }
    acc.loss += one.loss;
    acc.grad += one.grad;
  }
  if (reduction == Reduction::kMean && !batch.empty()) {
    const double inv = 1.0 / static_cast<double>(batch.size());
    acc.loss *= inv;
    acc.grad *= inv;
  }
  return acc;
}

ModelParams sgd_step(const ModelParams& model, const std::vector<int>& batch,
                     const Dataset& data, double eta, EvalCounter* counter) {
  if (eta <= 0.0) {
    throw std::invalid_argument("sgd_step requires eta > 0");
  }
  LossGrad g = loss_and_grad(model, batch, data, Reduction::kMean, counter);
  ModelParams next = model;
  next.theta = model.theta - eta * g.grad;
  return next;
}

Eigen::VectorXd validation_loss_vector(const ModelParams& model,
                                       const Dataset& valset) {
  if (valset.size() < 1) {
    throw std::invalid_argument("validation set is empty");
  }
  Eigen::VectorXd out(valset.size());
  for (Eigen::Index j = 0; j < valset.size(); ++j) {
    out[j] = sample_loss(model, valset.features.row(j).transpose(),
                         valset.labels[static_cast<std::size_t>(j)]);
    if (!std::isfinite(out[j])) {
      throw std::runtime_error("non-finite loss at validation index " +
                               std::to_string(j));
    }
  }
  return out;
}

Eigen::VectorXd penultimate_embedding(const ModelParams& model,
                                      const Eigen::VectorXd& x) {
  if (!x.allFinite()) {
    throw std::invalid_argument("embedding input contains non-finite values");
  }
  if (model.kind == ModelKind::kLogistic) {
    return x;
  }
  return (mlp_hidden_weights(model) * x).array().tanh();
}

Eigen::MatrixXd embedding_matrix(const ModelParams& model,
                                 const Dataset& data) {
  const Eigen::Index e =
      model.kind == ModelKind::kLogistic ? data.dim() : model.shape.hidden;
  Eigen::MatrixXd out(data.size(), e);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    out.row(i) =
        penultimate_embedding(model, data.features.row(i).transpose());
  }
  return out;
}

double accuracy(const ModelParams& model, const Dataset& data) {
  Eigen::Index hits = 0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    Eigen::Index pred = 0;
    logits_of(model, data.features.row(i).transpose()).maxCoeff(&pred);
    if (static_cast<int>(pred) == data.labels[static_cast<std::size_t>(i)]) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

const char* model_kind_name(ModelKind kind) {
  return kind == ModelKind::kLogistic ? "logistic" : "mlp";
}

ModelKind model_kind_from_name(const std::string& name) {
  if (name == "logistic" || name == "logreg") return ModelKind::kLogistic;
  if (name == "mlp") return ModelKind::kMlp;
  throw std::invalid_argument("unknown model kind: " + name);
}

}  // namespace checksel
