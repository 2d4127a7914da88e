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

#include "checksel/dataset.hpp"

namespace checksel {

// Desk-scale stand-in corpus: a seeded Gaussian mixture with unit isotropic
// noise around mutually near-orthogonal centers of norm `class_sep`, plus
// optional symmetric label noise. Classes may own several components, which
// makes subset completeness matter the way intra-class diversity does in
// image corpora.
struct MixtureSpec {
  int num_classes = 2;
  int components_per_class = 1;
  Eigen::Index dim = 2;
  double class_sep = 4.0;
  std::uint64_t seed = 0;
};

// Scales a dataset's features in place. Softmax models are invariant under
// x -> s*x with lr -> lr/s^2, so this only conditions gradient magnitudes
// (and with them the checkpoint-feature scale q).
void scale_features(Dataset& data, double factor);

// Component centers drawn once per spec seed (Gram-Schmidt of seeded normal
// directions when dim allows, plain normalized directions otherwise). Row
// c * components_per_class + j is component j of class c.
Eigen::MatrixXd mixture_means(const MixtureSpec& spec);

// Draws `count` labeled points around the given centers; a point's class is
// its component's row divided by `components_per_class`. Each label is
// flipped to a uniformly random other class with probability `label_noise`.
// `stream` decorrelates different splits of one experiment.
Dataset sample_mixture(const Eigen::MatrixXd& means, int components_per_class,
                       int count, double label_noise, std::uint64_t seed,
                       std::uint64_t stream);

}  // namespace checksel
