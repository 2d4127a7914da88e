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

#include <optional>
#include <string>
#include <vector>

#include "checksel/features.hpp"

namespace checksel {

// What happened to an offered checkpoint feature.
enum class OfferAction { kAppended, kReplaced, kRejected, kBuffered };

const char* offer_action_name(OfferAction action);

struct ReplacementDecision {
  OfferAction action = OfferAction::kRejected;
  std::optional<CheckpointId> removed;  // set when action == kReplaced
  std::string reason;                   // set when action == kRejected

  // Projections evaluated while scanning the incumbents (replacement path
  // only): the candidate's and the incumbent's projection onto the residual
  // that removing that incumbent would leave behind.
  struct Projection {
    CheckpointId incumbent;
    double candidate_on_residual = 0.0;
    double incumbent_on_residual = 0.0;
  };
  std::vector<Projection> projections;
};

struct SelectorOptions {
  int budget = 0;
  // Strict-inequality slack for the replacement comparisons; ties keep the
  // incumbent set stable.
  double tie_tolerance = 1e-12;
  // Ridge added to the Gram matrix when its Cholesky factorization fails.
  double ridge_lambda = 1e-10;
  // When set, the replacement scan tracks the incumbent's projection as the
  // running maximum, reproducing the printed form of the replacement rule
  // verbatim. Default tracks the candidate's winning projection, which is
  // the reading that makes the running-maximum comparison meaningful.
  bool literal_maxproj_update = false;
};

// Immutable snapshot of a finished selection.
struct SelectedCheckpointSet {
  struct Entry {
    CheckpointId id;
    Eigen::VectorXd unit;
    double scale = 0.0;
    double alpha = 0.0;
  };
  std::vector<Entry> entries;
  Eigen::VectorXd final_target;
};

// Budget-k online sparse approximation of a streaming cumulative target.
// Offers must arrive in stream order; the state is single-owner and never
// shared mutably. Candidates offered before the first target are buffered
// and flushed through the normal offer path once a target exists.
class SelectorState {
 public:
  explicit SelectorState(SelectorOptions options);

  // Sets the target for the new epoch and refits coefficients before any
  // offer of the epoch. Throws on a length mismatch with a prior target.
  void advance_epoch(const Eigen::VectorXd& target);

  // Appends while below budget, otherwise runs the replacement scan.
  // Zero-norm candidates are rejected without touching the state.
  ReplacementDecision offer(const CheckpointFeature& candidate);

  // Least-squares coefficients of the selected unit features against the
  // current target (normal equations, Cholesky, ridge fallback on a
  // non-positive-definite Gram matrix). No-op while the target is unset;
  // with an empty selection the estimate is zero.
  void refit();

  // ||target - estimate||_2 / ||target||_2; +infinity when ||target|| = 0.
  double normalized_residual() const;

  int size() const { return static_cast<int>(entries_.size()); }
  int budget() const { return options_.budget; }
  int epoch() const { return epoch_; }
  bool has_target() const { return target_set_; }
  bool last_refit_used_ridge() const { return last_refit_used_ridge_; }
  const Eigen::VectorXd& target() const;
  const Eigen::VectorXd& estimate() const { return estimate_; }
  const Eigen::VectorXd& alphas() const { return alphas_; }
  std::vector<CheckpointId> selected_ids() const;

  SelectedCheckpointSet finalize() const;

 private:
  struct Entry {
    CheckpointId id;
    Eigen::VectorXd unit;
    double scale = 0.0;
  };

  ReplacementDecision check_replace(const CheckpointFeature& candidate);
  bool holds(const CheckpointId& id) const;

  SelectorOptions options_;
  std::vector<Entry> entries_;
  Eigen::VectorXd alphas_;
  Eigen::VectorXd target_;
  Eigen::VectorXd estimate_;
  std::vector<CheckpointFeature> pending_;
  int epoch_ = 0;
  bool target_set_ = false;
  bool last_refit_used_ridge_ = false;
};

}  // namespace checksel
