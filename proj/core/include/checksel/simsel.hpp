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

#include "checksel/valuation.hpp"

namespace checksel {

// Cosine similarity in [-1, 1]; pairs involving a zero vector score 0, which
// makes zero contribs maximally dissimilar to everything (dissimilarity 1)
// and therefore poor representatives.
double contrib_cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// D_ij = 1 - cosine(row_i, row_j): symmetric, zero diagonal, entries in
// [0, 2].
Eigen::MatrixXd dissimilarity_matrix(const Eigen::MatrixXd& contrib_rows);

struct SubsetResult {
  std::vector<int> selected;
  double objective = 0.0;  // sum_i min_{j in selected} D_ij
  int windows = 0;         // stream windows processed (0 for one-shot)
};

// Greedy facility location over a dissimilarity matrix: f rounds, each
// adding the candidate that most decreases the total min-assignment
// dissimilarity; ties go to the lowest index. Selected entries are local
// row indices of D.
SubsetResult facility_location_select(const Eigen::MatrixXd& dissimilarity,
                                      int f);

double facility_location_objective(const Eigen::MatrixXd& dissimilarity,
                                   const std::vector<int>& selected);

// Streaming add/remove selection: seeds with the first f candidates (the
// caller supplies candidates sorted by descending value), then for each
// batch of size `stream_batch` pools it with the current representatives,
// rebuilds the local dissimilarity matrix, and reselects f greedily. Pools
// keep the candidates' sorted order, so tie-breaks favor higher-valued
// points; among equal values the caller's sort puts lower ids first.
// `contrib_rows` row r holds the contrib vector of candidate_ids[r].
SubsetResult simsel_stream(const std::vector<int>& candidate_ids,
                           const Eigen::MatrixXd& contrib_rows,
                           int stream_batch, int f);

}  // namespace checksel
