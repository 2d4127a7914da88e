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

#include "checksel/selector.hpp"

#include <Eigen/Cholesky>
#include <limits>
#include <stdexcept>

namespace checksel {

const char* offer_action_name(OfferAction action) {
  switch (action) {
    case OfferAction::kAppended:
      return "appended";
    case OfferAction::kReplaced:
      return "replaced";
    case OfferAction::kRejected:
      return "rejected";
    case OfferAction::kBuffered:
      return "buffered";
  }
  return "unknown";
}

SelectorState::SelectorState(SelectorOptions options)
    : options_(options) {
  if (options_.budget < 1) {
    throw std::invalid_argument("selector budget must be >= 1");
  }
  if (options_.tie_tolerance < 0.0 || options_.ridge_lambda < 0.0) {
    throw std::invalid_argument("selector tolerances must be >= 0");
  }
}

const Eigen::VectorXd& SelectorState::target() const {
  if (!target_set_) throw std::logic_error("selector target not set");
  return target_;
}

bool SelectorState::holds(const CheckpointId& id) const {
  for (const auto& e : entries_) {
    if (e.id == id) return true;
  }
  return false;
}

void SelectorState::advance_epoch(const Eigen::VectorXd& target) {
  if (target_set_ && target.size() != target_.size()) {
    throw std::invalid_argument("target length mismatch with prior epoch");
  }
  target_ = target;
  target_set_ = true;
  ++epoch_;
  refit();
  if (!pending_.empty()) {
    std::vector<CheckpointFeature> buffered;
    buffered.swap(pending_);
    for (auto& f : buffered) offer(f);
  }
}

void SelectorState::refit() {
  if (!target_set_) return;
  last_refit_used_ridge_ = false;
  const auto n = static_cast<Eigen::Index>(entries_.size());
  if (n == 0) {
    alphas_.resize(0);
    estimate_ = Eigen::VectorXd::Zero(target_.size());
    return;
  }
  Eigen::MatrixXd basis(target_.size(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    basis.col(j) = entries_[static_cast<std::size_t>(j)].unit;
  }
  const Eigen::MatrixXd gram = basis.transpose() * basis;
  const Eigen::VectorXd rhs = basis.transpose() * target_;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() == Eigen::Success) {
    alphas_ = llt.solve(rhs);
  } else {
    last_refit_used_ridge_ = true;
    Eigen::MatrixXd ridged = gram;
    ridged.diagonal().array() += options_.ridge_lambda;
    alphas_ = Eigen::LLT<Eigen::MatrixXd>(ridged).solve(rhs);
  }
  estimate_ = basis * alphas_;
}

ReplacementDecision SelectorState::offer(const CheckpointFeature& candidate) {
  ReplacementDecision decision;
  if (!target_set_) {
    pending_.push_back(candidate);
    decision.action = OfferAction::kBuffered;
    return decision;
  }
  if (!candidate.usable()) {
    decision.action = OfferAction::kRejected;
    decision.reason = "zero-norm feature";
    return decision;
  }
  if (candidate.unit.size() != target_.size()) {
    throw std::invalid_argument("candidate feature length mismatch");
  }
  if (holds(candidate.id)) {
    decision.action = OfferAction::kRejected;
    decision.reason = "checkpoint already selected";
    return decision;
  }
  if (size() < options_.budget) {
    entries_.push_back({candidate.id, candidate.unit, candidate.scale});
    refit();
    decision.action = OfferAction::kAppended;
    return decision;
  }
  return check_replace(candidate);
}

ReplacementDecision SelectorState::check_replace(
    const CheckpointFeature& candidate) {
  ReplacementDecision decision;
  const Eigen::VectorXd residual = target_ - estimate_;
  const double tol = options_.tie_tolerance;

  double maxproj = -std::numeric_limits<double>::infinity();
  int swap_index = -1;
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    // Residual the fit would have if incumbent j were dropped with all
    // other coefficients frozen.
    const Eigen::VectorXd hypothetical =
        residual + alphas_[static_cast<Eigen::Index>(j)] * entries_[j].unit;
    const double candidate_proj = candidate.unit.dot(hypothetical);
    const double incumbent_proj = entries_[j].unit.dot(hypothetical);
    decision.projections.push_back(
        {entries_[j].id, candidate_proj, incumbent_proj});
    if (candidate_proj > incumbent_proj + tol &&
        candidate_proj > maxproj + tol) {
      maxproj = options_.literal_maxproj_update ? incumbent_proj
                                                : candidate_proj;
      swap_index = static_cast<int>(j);
    }
  }

  if (swap_index < 0) {
    decision.action = OfferAction::kRejected;
    decision.reason = "no incumbent beaten";
    return decision;
  }
  decision.action = OfferAction::kReplaced;
  decision.removed = entries_[static_cast<std::size_t>(swap_index)].id;
  entries_[static_cast<std::size_t>(swap_index)] = {candidate.id,
                                                    candidate.unit,
                                                    candidate.scale};
  refit();
  return decision;
}

double SelectorState::normalized_residual() const {
  if (!target_set_) throw std::logic_error("selector target not set");
  const double target_norm = target_.norm();
  if (target_norm == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const Eigen::VectorXd estimate =
      entries_.empty() ? Eigen::VectorXd::Zero(target_.size()) : estimate_;
  return (target_ - estimate).norm() / target_norm;
}

std::vector<CheckpointId> SelectorState::selected_ids() const {
  std::vector<CheckpointId> ids;
  ids.reserve(entries_.size());
  for (const auto& e : entries_) ids.push_back(e.id);
  return ids;
}

SelectedCheckpointSet SelectorState::finalize() const {
  SelectedCheckpointSet out;
  out.entries.reserve(entries_.size());
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    out.entries.push_back({entries_[j].id, entries_[j].unit, entries_[j].scale,
                           alphas_.size() > 0
                               ? alphas_[static_cast<Eigen::Index>(j)]
                               : 0.0});
  }
  if (target_set_) out.final_target = target_;
  return out;
}

}  // namespace checksel
