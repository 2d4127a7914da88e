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

#include "checksel/simsel.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace checksel {

double contrib_cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("contrib vector length mismatch");
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

Eigen::MatrixXd dissimilarity_matrix(const Eigen::MatrixXd& contrib_rows) {
  const Eigen::Index n = contrib_rows.rows();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = 1.0 - contrib_cosine(contrib_rows.row(i).transpose(),
                                            contrib_rows.row(j).transpose());
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

SubsetResult facility_location_select(const Eigen::MatrixXd& dissimilarity,
                                      int f) {
  const auto n = static_cast<int>(dissimilarity.rows());
  if (dissimilarity.cols() != n) {
    throw std::invalid_argument("dissimilarity matrix must be square");
  }
  if (f < 1 || f > n) {
    throw std::invalid_argument("subset size out of range");
  }

  SubsetResult result;
  Eigen::VectorXd cost =
      Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  std::vector<bool> selected(static_cast<std::size_t>(n), false);
  for (int round = 0; round < f; ++round) {
    double best_obj = std::numeric_limits<double>::infinity();
    int best = -1;
    for (int c = 0; c < n; ++c) {
      if (selected[static_cast<std::size_t>(c)]) continue;
      double obj = 0.0;
      for (int i = 0; i < n; ++i) {
        obj += std::min(cost[i], dissimilarity(i, c));
      }
      if (obj < best_obj) {  // strict: first (lowest-index) winner kept
        best_obj = obj;
        best = c;
      }
    }
    selected[static_cast<std::size_t>(best)] = true;
    result.selected.push_back(best);
    for (int i = 0; i < n; ++i) {
      cost[i] = std::min(cost[i], dissimilarity(i, best));
    }
  }
  result.objective = cost.sum();
  return result;
}

double facility_location_objective(const Eigen::MatrixXd& dissimilarity,
                                   const std::vector<int>& selected) {
  if (selected.empty()) {
    throw std::invalid_argument("objective needs a non-empty selection");
  }
  double obj = 0.0;
  for (Eigen::Index i = 0; i < dissimilarity.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int j : selected) best = std::min(best, dissimilarity(i, j));
    obj += best;
  }
  return obj;
}

SubsetResult simsel_stream(const std::vector<int>& candidate_ids,
                           const Eigen::MatrixXd& contrib_rows,
                           int stream_batch, int f) {
  const auto n = static_cast<int>(candidate_ids.size());
  if (n == 0) throw std::invalid_argument("empty candidate list");
  if (contrib_rows.rows() != n) {
    throw std::invalid_argument("one contrib row per candidate required");
  }
  if (f < 1 || f > n) throw std::invalid_argument("subset size out of range");
  if (stream_batch < 1) throw std::invalid_argument("stream batch must be >= 1");

  std::unordered_map<int, int> row_of;
  row_of.reserve(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    if (!row_of.emplace(candidate_ids[static_cast<std::size_t>(r)], r).second) {
      throw std::invalid_argument("duplicate candidate id");
    }
  }

  SubsetResult result;
  std::vector<int> current(candidate_ids.begin(), candidate_ids.begin() + f);
  for (int start = f; start < n; start += stream_batch) {
    const int end = std::min(start + stream_batch, n);
    std::vector<int> pool = current;
    pool.insert(pool.end(), candidate_ids.begin() + start,
                candidate_ids.begin() + end);
    // Pools keep the candidates' value rank so the local lowest-index
    // tie-break resolves degenerate dissimilarities toward higher-valued
    // points instead of arbitrary ids.
    std::sort(pool.begin(), pool.end(),
              [&](int a, int b) { return row_of.at(a) < row_of.at(b); });

    Eigen::MatrixXd rows(static_cast<Eigen::Index>(pool.size()),
                         contrib_rows.cols());
    for (std::size_t r = 0; r < pool.size(); ++r) {
      rows.row(static_cast<Eigen::Index>(r)) =
          contrib_rows.row(row_of.at(pool[r]));
    }
    const SubsetResult local =
        facility_location_select(dissimilarity_matrix(rows), f);
    current.clear();
    for (int idx : local.selected) {
      current.push_back(pool[static_cast<std::size_t>(idx)]);
    }
    result.objective = local.objective;
    ++result.windows;
  }

  if (result.windows == 0) {
    // Single window: every candidate is already a representative.
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(current.size()),
                         contrib_rows.cols());
    for (std::size_t r = 0; r < current.size(); ++r) {
      rows.row(static_cast<Eigen::Index>(r)) =
          contrib_rows.row(row_of.at(current[r]));
    }
    std::vector<int> all(current.size());
    for (std::size_t r = 0; r < all.size(); ++r) all[r] = static_cast<int>(r);
    result.objective =
        facility_location_objective(dissimilarity_matrix(rows), all);
  }

  std::sort(current.begin(), current.end());
  result.selected = std::move(current);
  return result;
}

}  // namespace checksel
