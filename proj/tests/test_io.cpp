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

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "checksel/datagen.hpp"
#include "checksel/dataset_io.hpp"
#include "checksel/manifest.hpp"
#include "checksel/rng.hpp"

using namespace checksel;

namespace {

std::filesystem::path temp_dir() {
  const auto dir =
      std::filesystem::temp_directory_path() / "checksel_io_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Dataset random_dataset(std::uint64_t seed, int n, Eigen::Index d,
                       int classes) {
  const Eigen::MatrixXd means = mixture_means({classes, 1, d, 3.0, seed});
  return sample_mixture(means, 1, n, 0.1, seed, 1);
}

}  // namespace

TEST_CASE("CSV datasets round-trip losslessly") {
  const auto dir = temp_dir();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Dataset data = random_dataset(seed, 17, 4, 3);
    const std::string path = (dir / "roundtrip.csv").string();
    write_dataset_csv(path, data);
    const Dataset back = read_dataset_csv(path);
    CHECK(back.features == data.features);  // shortest round-trip formatting
    CHECK(back.labels == data.labels);
    CHECK(back.num_classes == data.num_classes);
  }
}

TEST_CASE("raw datasets round-trip at float32 precision") {
  const auto dir = temp_dir();
  const Dataset data = random_dataset(9, 11, 3, 2);
  const std::string path = (dir / "roundtrip.bin").string();
  write_dataset_raw(path, data);
  const Dataset back = read_dataset_raw(path);
  REQUIRE(back.size() == data.size());
  CHECK(back.labels == data.labels);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index j = 0; j < data.dim(); ++j) {
      CHECK(back.features(i, j) ==
            static_cast<double>(static_cast<float>(data.features(i, j))));
    }
  }
}

TEST_CASE("read_dataset sniffs the format from the magic bytes") {
  const auto dir = temp_dir();
  const Dataset data = random_dataset(3, 7, 2, 2);
  const std::string csv = (dir / "sniff.csv").string();
  const std::string raw = (dir / "sniff.bin").string();
  write_dataset_csv(csv, data);
  write_dataset_raw(raw, data);
  CHECK(read_dataset(csv).features == data.features);
  CHECK(read_dataset(raw).size() == data.size());
}

TEST_CASE("CSV reader rejects malformed input") {
  const auto dir = temp_dir();
  const std::string path = (dir / "bad.csv").string();
  {
    std::ofstream out(path);
    out << "f0,f1\n1.0,2.0\n";  // no label column
  }
  CHECK_THROWS_WITH_AS(read_dataset_csv(path), doctest::Contains("label"),
                       std::runtime_error);
  {
    std::ofstream out(path);
    out << "f0,label\n1.0,0\nnot_a_number,1\n";
  }
  CHECK_THROWS_AS(read_dataset_csv(path), std::runtime_error);
}

TEST_CASE("values CSV round-trips records of both sources") {
  const auto dir = temp_dir();
  std::vector<ValueRecord> records;
  ValueRecord direct;
  direct.index = 0;
  direct.value = -1.25;
  direct.owners = {{2, 3}, {4, 1}};
  records.push_back(direct);
  ValueRecord prop;
  prop.index = 1;
  prop.value = 0.5;
  prop.source = ValueRecord::Source::kPropagated;
  prop.from_index = 0;
  prop.epsilon = 2.75;
  records.push_back(prop);

  const std::string path = (dir / "values.csv").string();
  write_values_csv(path, records, {"method=checksel", "grad_evals=12"});
  const auto back = read_values_csv(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].value == -1.25);
  CHECK(back[0].owners.size() == 2);
  CHECK(back[0].owners[1] == CheckpointId{4, 1});
  CHECK(back[1].source == ValueRecord::Source::kPropagated);
  CHECK(back[1].from_index == 0);
  CHECK(back[1].epsilon == 2.75);
}

TEST_CASE("contrib files round-trip bit-exactly") {
  const auto dir = temp_dir();
  Rng rng(21);
  std::vector<ContribVector> contribs;
  for (int i : {3, 8, 11}) {
    ContribVector cv;
    cv.index = i;
    cv.contrib.resize(5);
    for (Eigen::Index j = 0; j < 5; ++j) cv.contrib[j] = rng.normal();
    contribs.push_back(cv);
  }
  const std::string path = (dir / "contribs.bin").string();
  write_contribs(path, contribs);
  const auto back = read_contribs(path);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].index == contribs[i].index);
    CHECK(back[i].contrib == contribs[i].contrib);
  }
}

TEST_CASE("subset files carry the summary line and indices") {
  const auto dir = temp_dir();
  SubsetResult result;
  result.selected = {5, 2, 19};
  result.objective = 0.75;
  result.windows = 3;
  const std::string path = (dir / "subset.txt").string();
  write_subset(path, result);
  CHECK(read_subset(path) == std::vector<int>{5, 2, 19});
  const std::string text = slurp(path);
  CHECK(text.find("# f=3 objective=0.75 windows=3") != std::string::npos);
}

TEST_CASE("manifests restore every field") {
  const auto dir = temp_dir();
  RunManifest m;
  m.mode = SelectionMode::kChecksel;
  m.model_kind = ModelKind::kMlp;
  m.shape = {3, 4, 2};
  m.config = {2, 5, 0.125, 77, true};
  m.train_path = "train.csv";
  m.val_path = "val.csv";
  m.schedule_digest = 0xfeedfacecafebeefULL;
  m.initial_val_loss = Eigen::VectorXd::LinSpaced(3, 0.0, 1.0);
  m.epoch_val_loss = {Eigen::VectorXd::Constant(3, 0.5),
                      Eigen::VectorXd::Constant(3, 0.25)};
  m.final_theta = Eigen::VectorXd::LinSpaced(20, -1.0, 1.0);
  m.residual_curve = {0.9, 0.4};
  SelectedCheckpoint cp;
  cp.id = {2, 3};
  cp.alpha = -0.75;
  cp.scale = 1.5;
  cp.unit_feature = Eigen::VectorXd::Constant(3, 1.0 / std::sqrt(3.0));
  cp.batch_members = {4, 9};
  cp.snapshot = Eigen::VectorXd::LinSpaced(20, 0.0, 2.0);
  m.selected.push_back(cp);

  const std::string path = (dir / "manifest.json").string();
  m.save(path);
  const RunManifest back = RunManifest::load(path);
  CHECK(back.mode == m.mode);
  CHECK(back.model_kind == m.model_kind);
  CHECK(back.shape.input_dim == 3);
  CHECK(back.config.learning_rate == 0.125);
  CHECK(back.config.seed == 77);
  CHECK(back.schedule_digest == m.schedule_digest);
  CHECK(back.initial_val_loss == m.initial_val_loss);
  CHECK(back.epoch_val_loss[1] == m.epoch_val_loss[1]);
  CHECK(back.final_theta == m.final_theta);
  CHECK(back.residual_curve == m.residual_curve);
  REQUIRE(back.selected.size() == 1);
  CHECK(back.selected[0].id == cp.id);
  CHECK(back.selected[0].alpha == cp.alpha);
  CHECK(back.selected[0].unit_feature == cp.unit_feature);
  CHECK(back.selected[0].batch_members == cp.batch_members);
  CHECK(back.selected[0].snapshot == cp.snapshot);
  CHECK_THROWS_AS(RunManifest::load((dir / "missing.json").string()),
                  std::runtime_error);
}

TEST_CASE("mixture generator basics") {
  SUBCASE("means are near-orthogonal at the requested separation") {
    const Eigen::MatrixXd means = mixture_means({3, 1, 8, 4.0, 5});
    for (int c = 0; c < 3; ++c) {
      CHECK(means.row(c).norm() == doctest::Approx(4.0).epsilon(1e-9));
      for (int o = c + 1; o < 3; ++o) {
        CHECK(std::abs(means.row(c).dot(means.row(o))) <= 1e-9);
      }
    }
  }

  SUBCASE("label noise hits roughly the requested fraction") {
    const Eigen::MatrixXd means = mixture_means({2, 1, 6, 8.0, 11});
    const Dataset clean = sample_mixture(means, 1, 2000, 0.0, 11, 1);
    const Dataset noisy = sample_mixture(means, 1, 2000, 0.2, 11, 1);
    int flipped = 0;
    for (std::size_t i = 0; i < clean.labels.size(); ++i) {
      if (clean.labels[i] != noisy.labels[i]) ++flipped;
    }
    CHECK(flipped > 320);
    CHECK(flipped < 480);
  }

  SUBCASE("bad specs are rejected") {
    CHECK_THROWS_AS(mixture_means({1, 1, 4, 1.0, 0}), std::invalid_argument);
    const Eigen::MatrixXd means = mixture_means({2, 1, 4, 1.0, 0});
    CHECK_THROWS_AS(sample_mixture(means, 1, 0, 0.0, 0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_mixture(means, 1, 5, 1.0, 0, 1),
                    std::invalid_argument);
  }
}
