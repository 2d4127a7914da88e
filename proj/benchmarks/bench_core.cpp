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

#include <benchmark/benchmark.h>

#include "checksel/datagen.hpp"
#include "checksel/features.hpp"
#include "checksel/rng.hpp"
#include "checksel/selector.hpp"
#include "checksel/simsel.hpp"

namespace {

using namespace checksel;

Dataset bench_data(int n, Eigen::Index d, std::uint64_t seed) {
  const Eigen::MatrixXd means = mixture_means({2, 1, d, 3.0, seed});
  return sample_mixture(means, 1, n, 0.0, seed, 1);
}

void BM_LossAndGrad(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  const Dataset data = bench_data(64, d, 1);
  const ModelParams model = init_params(ModelKind::kLogistic, {d, 0, 2}, 1);
  std::vector<int> batch(64);
  for (int i = 0; i < 64; ++i) batch[static_cast<std::size_t>(i)] = i;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        loss_and_grad(model, batch, data, Reduction::kSum));
  }
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_LossAndGrad)->Arg(16)->Arg(64)->Arg(256);

void BM_MlpSampleGrad(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  const Dataset data = bench_data(1, d, 2);
  const ModelParams model = init_params(ModelKind::kMlp, {d, 32, 4}, 2);
  const Eigen::VectorXd x = data.features.row(0).transpose();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_loss_grad(model, x, 0));
  }
}
BENCHMARK(BM_MlpSampleGrad)->Arg(32)->Arg(128);

void BM_CheckpointFeature(benchmark::State& state) {
  const auto m = static_cast<Eigen::Index>(state.range(0));
  Rng rng(3);
  Eigen::MatrixXd val_grads(m, 256);
  for (Eigen::Index i = 0; i < val_grads.size(); ++i) {
    val_grads(i / 256, i % 256) = rng.normal();
  }
  Eigen::VectorXd g(256);
  for (Eigen::Index i = 0; i < 256; ++i) g[i] = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(checkpoint_feature(g, val_grads));
  }
}
BENCHMARK(BM_CheckpointFeature)->Arg(32)->Arg(128)->Arg(512);

void BM_SelectorOffer(benchmark::State& state) {
  const int budget = static_cast<int>(state.range(0));
  constexpr Eigen::Index kDim = 64;
  Rng rng(4);
  Eigen::VectorXd target(kDim);
  for (Eigen::Index i = 0; i < kDim; ++i) target[i] = rng.normal();

  SelectorState selector({budget});
  selector.advance_epoch(target);
  int id = 0;
  for (int i = 0; i < budget; ++i) {
    Eigen::VectorXd raw(kDim);
    for (Eigen::Index j = 0; j < kDim; ++j) raw[j] = rng.normal();
    selector.offer(CheckpointFeature::from_raw({1, ++id}, raw));
  }
  for (auto _ : state) {
    Eigen::VectorXd raw(kDim);
    for (Eigen::Index j = 0; j < kDim; ++j) raw[j] = rng.normal();
    benchmark::DoNotOptimize(
        selector.offer(CheckpointFeature::from_raw({1, ++id}, raw)));
  }
}
BENCHMARK(BM_SelectorOffer)->Arg(8)->Arg(16)->Arg(32);

void BM_FacilityLocation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(5);
  Eigen::MatrixXd contribs(n, 16);
  for (Eigen::Index i = 0; i < contribs.size(); ++i) {
    contribs(i / 16, i % 16) = rng.normal();
  }
  const Eigen::MatrixXd d = dissimilarity_matrix(contribs);
  for (auto _ : state) {
    benchmark::DoNotOptimize(facility_location_select(d, n / 8));
  }
}
BENCHMARK(BM_FacilityLocation)->Arg(64)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
