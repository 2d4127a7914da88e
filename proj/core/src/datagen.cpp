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

#include "checksel/datagen.hpp"

#include <stdexcept>

#include "checksel/rng.hpp"

namespace checksel {

Eigen::MatrixXd mixture_means(const MixtureSpec& spec) {
  if (spec.num_classes < 2 || spec.components_per_class < 1 ||
      spec.dim < 1 || spec.class_sep <= 0.0) {
    throw std::invalid_argument("bad mixture spec");
  }
  const int centers = spec.num_classes * spec.components_per_class;
  Rng rng(mix_seed(spec.seed, 0x6d65616eULL));
  Eigen::MatrixXd means(centers, spec.dim);
  for (int c = 0; c < centers; ++c) {
    Eigen::VectorXd dir(spec.dim);
    for (Eigen::Index j = 0; j < spec.dim; ++j) dir[j] = rng.normal();
    if (spec.dim >= centers) {
      // Gram-Schmidt against earlier centers keeps pairwise distances at
      // class_sep * sqrt(2).
      for (int prev = 0; prev < c; ++prev) {
        const Eigen::VectorXd m = means.row(prev).transpose();
        dir -= (dir.dot(m) / m.squaredNorm()) * m;
      }
    }
    const double norm = dir.norm();
    if (norm < 1e-12) {
      throw std::runtime_error("degenerate mixture direction draw");
    }
    means.row(c) = (spec.class_sep / norm) * dir;
  }
  return means;
}

Dataset sample_mixture(const Eigen::MatrixXd& means, int components_per_class,
                       int count, double label_noise, std::uint64_t seed,
                       std::uint64_t stream) {
  if (count < 1) throw std::invalid_argument("sample count must be >= 1");
  if (label_noise < 0.0 || label_noise >= 1.0) {
    throw std::invalid_argument("label noise must be in [0, 1)");
  }
  const auto centers = static_cast<int>(means.rows());
  if (components_per_class < 1 || centers % components_per_class != 0) {
    throw std::invalid_argument("centers do not split into classes evenly");
  }
  const int num_classes = centers / components_per_class;
  Rng rng(mix_seed(seed, 0x64617461ULL + stream));
  // Noise draws come from their own stream so the same (seed, stream) yields
  // identical features and true classes at any noise rate.
  Rng noise_rng(mix_seed(seed, 0x666c6970ULL + stream));

  Dataset data;
  data.features.resize(count, means.cols());
  data.labels.resize(static_cast<std::size_t>(count));
  data.num_classes = num_classes;
  for (int i = 0; i < count; ++i) {
    const int component =
        static_cast<int>(rng.below(static_cast<std::uint64_t>(centers)));
    const int true_class = component / components_per_class;
    for (Eigen::Index j = 0; j < means.cols(); ++j) {
      data.features(i, j) = means(component, j) + rng.normal();
    }
    int label = true_class;
    if (label_noise > 0.0 && noise_rng.uniform01() < label_noise) {
      // Symmetric flip to a uniformly chosen other class.
      const int shift =
          1 + static_cast<int>(noise_rng.below(
                  static_cast<std::uint64_t>(num_classes - 1)));
      label = (true_class + shift) % num_classes;
    }
    data.labels[static_cast<std::size_t>(i)] = label;
  }
  data.validate();
  return data;
}

void scale_features(Dataset& data, double factor) {
  if (factor <= 0.0) throw std::invalid_argument("scale factor must be > 0");
  data.features *= factor;
}

}  // namespace checksel
