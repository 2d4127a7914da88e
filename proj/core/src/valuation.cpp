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

#include "checksel/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace checksel {

Eigen::VectorXd per_sample_feature(const ModelParams& snapshot,
                                   const Eigen::VectorXd& x, int y,
                                   const Dataset& valset,
                                   EvalCounter* counter) {
  const LossGrad sample = sample_loss_grad(snapshot, x, y, counter);
  if (!sample.grad.allFinite()) {
    throw std::runtime_error("non-finite sample gradient in valuation");
  }
  Eigen::VectorXd out(valset.size());
  for (Eigen::Index j = 0; j < valset.size(); ++j) {
    const LossGrad vg =
        sample_loss_grad(snapshot, valset.features.row(j).transpose(),
                         valset.labels[static_cast<std::size_t>(j)], counter);
    const double q = sample.grad.dot(vg.grad);
    out[j] = q + 0.5 * q * q;
  }
  return out;
}

ValuationResult value_scores(const std::vector<SelectedCheckpoint>& selected,
                             ModelKind kind, const ModelShape& shape,
                             const Dataset& train, const Dataset& valset,
                             EvalCounter* counter) {
  const Eigen::Index p = param_count(kind, shape);
  std::map<int, Eigen::VectorXd> contrib_by_index;
  std::map<int, std::vector<CheckpointId>> owners_by_index;

  for (const auto& cp : selected) {
    if (cp.snapshot.size() != p) {
      throw std::runtime_error("missing snapshot for checkpoint " +
                               checkpoint_id_string(cp.id));
    }
    if (cp.batch_members.empty()) {
      continue;
    }
    ModelParams snapshot{kind, shape, cp.snapshot};
    const double weight =
        cp.alpha / static_cast<double>(cp.batch_members.size());
    for (int m : cp.batch_members) {
      if (m < 0 || m >= train.size()) {
        throw std::runtime_error("batch member out of range for checkpoint " +
                                 checkpoint_id_string(cp.id));
      }
      const Eigen::VectorXd feature = per_sample_feature(
          snapshot, train.features.row(m).transpose(),
          train.labels[static_cast<std::size_t>(m)], valset, counter);
      auto [it, inserted] = contrib_by_index.try_emplace(
          m, Eigen::VectorXd::Zero(valset.size()));
      it->second += weight * feature;
      owners_by_index[m].push_back(cp.id);
    }
  }

  ValuationResult result;
  result.records.reserve(contrib_by_index.size());
  result.contribs.reserve(contrib_by_index.size());
  for (auto& [index, contrib] : contrib_by_index) {
    ValueRecord rec;
    rec.index = index;
    rec.value = contrib.sum();
    rec.source = ValueRecord::Source::kDirect;
    rec.owners = owners_by_index[index];
    result.records.push_back(std::move(rec));
    result.contribs.push_back({index, std::move(contrib)});
  }
  return result;
}

std::vector<ValueRecord> propagate_values(
    const std::vector<ValueRecord>& direct,
    const Eigen::MatrixXd& embeddings) {
  if (direct.empty()) {
    throw std::invalid_argument("propagation needs at least one direct record");
  }
  const Eigen::Index n = embeddings.rows();
  std::vector<const ValueRecord*> by_index(static_cast<std::size_t>(n),
                                           nullptr);
  for (const auto& rec : direct) {
    if (rec.index < 0 || rec.index >= n) {
      throw std::invalid_argument("direct record index out of range");
    }
    by_index[static_cast<std::size_t>(rec.index)] = &rec;
  }

  std::vector<ValueRecord> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index e = 0; e < n; ++e) {
    if (const ValueRecord* rec = by_index[static_cast<std::size_t>(e)]) {
      out.push_back(*rec);
      continue;
    }
    // Brute-force nearest direct neighbor; directs are scanned in ascending
    // index order so a strict comparison keeps the smallest index on ties.
    double best = std::numeric_limits<double>::infinity();
    const ValueRecord* nearest = nullptr;
    for (const auto& rec : direct) {
      const double d2 =
          (embeddings.row(e) - embeddings.row(rec.index)).squaredNorm();
      if (d2 < best) {
        best = d2;
        nearest = &rec;
      }
    }
    ValueRecord rec;
    rec.index = static_cast<int>(e);
    rec.value = nearest->value;
    rec.source = ValueRecord::Source::kPropagated;
    rec.from_index = nearest->index;
    rec.epsilon = std::sqrt(best);
    out.push_back(std::move(rec));
  }
  std::sort(out.begin(), out.end(),
            [](const ValueRecord& a, const ValueRecord& b) {
              return a.index < b.index;
            });
  return out;
}

Eigen::VectorXd tracin_scores(
    const std::vector<std::pair<int, Eigen::VectorXd>>& epoch_snapshots,
    const std::vector<double>& etas, ModelKind kind, const ModelShape& shape,
    const Dataset& train, const Dataset& valset, EvalCounter* counter) {
  if (epoch_snapshots.empty()) {
    throw std::invalid_argument("tracin needs at least one snapshot");
  }
  if (etas.size() != epoch_snapshots.size()) {
    throw std::invalid_argument("one eta per snapshot required");
  }
  Eigen::VectorXd values = Eigen::VectorXd::Zero(train.size());
  for (std::size_t t = 0; t < epoch_snapshots.size(); ++t) {
    ModelParams snapshot{kind, shape, epoch_snapshots[t].second};
    snapshot.validate();
    Eigen::VectorXd val_grad_sum =
        Eigen::VectorXd::Zero(snapshot.theta.size());
    for (Eigen::Index j = 0; j < valset.size(); ++j) {
      val_grad_sum += sample_loss_grad(
                          snapshot, valset.features.row(j).transpose(),
                          valset.labels[static_cast<std::size_t>(j)], counter)
                          .grad;
    }
    for (Eigen::Index i = 0; i < train.size(); ++i) {
      const LossGrad g = sample_loss_grad(
          snapshot, train.features.row(i).transpose(),
          train.labels[static_cast<std::size_t>(i)], counter);
      values[i] += etas[t] * g.grad.dot(val_grad_sum);
    }
  }
  return values;
}

ConfidenceMap confidence_map(
    const std::vector<std::pair<int, Eigen::VectorXd>>& epoch_snapshots,
    ModelKind kind, const ModelShape& shape, const Dataset& train) {
  if (epoch_snapshots.empty()) {
    throw std::invalid_argument("confidence map needs at least one snapshot");
  }
  ConfidenceMap map;
  map.confidence = Eigen::VectorXd::Zero(train.size());
  map.mean_loss = Eigen::VectorXd::Zero(train.size());
  for (const auto& [epoch, theta] : epoch_snapshots) {
    ModelParams snapshot{kind, shape, theta};
    snapshot.validate();
    for (Eigen::Index i = 0; i < train.size(); ++i) {
      const Eigen::VectorXd x = train.features.row(i).transpose();
      const int y = train.labels[static_cast<std::size_t>(i)];
      map.confidence[i] += sample_class_probs(snapshot, x)[y];
      map.mean_loss[i] += sample_loss(snapshot, x, y);
    }
  }
  const double inv = 1.0 / static_cast<double>(epoch_snapshots.size());
  map.confidence *= inv;
  map.mean_loss *= inv;
  return map;
}

}  // namespace checksel
