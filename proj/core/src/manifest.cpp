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

#include "checksel/manifest.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace checksel {

namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "checksel/manifest-v1";

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  }
  return v;
}

}  // namespace

const char* selection_mode_name(SelectionMode mode) {
  switch (mode) {
    case SelectionMode::kChecksel:
      return "checksel";
    case SelectionMode::kUniform:
      return "uniform";
    case SelectionMode::kLossGap:
      return "loss-gap";
  }
  return "unknown";
}

SelectionMode selection_mode_from_name(const std::string& name) {
  if (name == "checksel") return SelectionMode::kChecksel;
  if (name == "uniform") return SelectionMode::kUniform;
  if (name == "loss-gap" || name == "lossgap") return SelectionMode::kLossGap;
  throw std::invalid_argument("unknown selection mode: " + name);
}

void RunManifest::save(const std::string& path) const {
  json j;
  j["format"] = kFormatTag;
  j["mode"] = selection_mode_name(mode);
  j["model"] = {{"kind", model_kind_name(model_kind)},
                {"input_dim", shape.input_dim},
                {"hidden", shape.hidden},
                {"num_classes", shape.num_classes}};
  j["config"] = {{"epochs", config.epochs},
                 {"batch_size", config.batch_size},
                 {"learning_rate", config.learning_rate},
                 {"seed", config.seed},
                 {"shuffle", config.shuffle}};
  j["data"] = {{"train", train_path}, {"val", val_path}};
  j["schedule_digest"] = schedule_digest;
  j["initial_val_loss"] = vec_to_json(initial_val_loss);
  json epochs = json::array();
  for (const auto& v : epoch_val_loss) epochs.push_back(vec_to_json(v));
  j["epoch_val_loss"] = std::move(epochs);
  j["final_theta"] = vec_to_json(final_theta);
  j["residual_curve"] = residual_curve;

  json sel = json::array();
  for (const auto& cp : selected) {
    sel.push_back({{"epoch", cp.id.epoch},
                   {"batch", cp.id.batch},
                   {"alpha", cp.alpha},
                   {"scale", cp.scale},
                   {"unit_feature", vec_to_json(cp.unit_feature)},
                   {"batch_members", cp.batch_members},
                   {"snapshot", vec_to_json(cp.snapshot)}});
  }
  j["selected"] = std::move(sel);

  json snaps = json::array();
  for (const auto& s : epoch_snapshots) {
    snaps.push_back({{"epoch", s.epoch}, {"theta", vec_to_json(s.theta)}});
  }
  j["epoch_snapshots"] = std::move(snaps);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << j.dump(1) << '\n';
}

RunManifest RunManifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  json j;
  in >> j;
  if (j.value("format", "") != kFormatTag) {
    throw std::runtime_error("not a recognized manifest: " + path);
  }

  RunManifest m;
  m.mode = selection_mode_from_name(j.at("mode").get<std::string>());
  const auto& model = j.at("model");
  m.model_kind = model_kind_from_name(model.at("kind").get<std::string>());
  m.shape.input_dim = model.at("input_dim").get<Eigen::Index>();
  m.shape.hidden = model.at("hidden").get<Eigen::Index>();
  m.shape.num_classes = model.at("num_classes").get<int>();
  const auto& config = j.at("config");
  m.config.epochs = config.at("epochs").get<int>();
  m.config.batch_size = config.at("batch_size").get<int>();
  m.config.learning_rate = config.at("learning_rate").get<double>();
  m.config.seed = config.at("seed").get<std::uint64_t>();
  m.config.shuffle = config.at("shuffle").get<bool>();
  m.train_path = j.at("data").at("train").get<std::string>();
  m.val_path = j.at("data").at("val").get<std::string>();
  m.schedule_digest = j.at("schedule_digest").get<std::uint64_t>();
  m.initial_val_loss = vec_from_json(j.at("initial_val_loss"));
  for (const auto& v : j.at("epoch_val_loss")) {
    m.epoch_val_loss.push_back(vec_from_json(v));
  }
  m.final_theta = vec_from_json(j.at("final_theta"));
  m.residual_curve = j.at("residual_curve").get<std::vector<double>>();

  for (const auto& cp : j.at("selected")) {
    SelectedCheckpoint s;
    s.id.epoch = cp.at("epoch").get<int>();
    s.id.batch = cp.at("batch").get<int>();
    s.alpha = cp.at("alpha").get<double>();
    s.scale = cp.at("scale").get<double>();
    s.unit_feature = vec_from_json(cp.at("unit_feature"));
    s.batch_members = cp.at("batch_members").get<std::vector<int>>();
    s.snapshot = vec_from_json(cp.at("snapshot"));
    m.selected.push_back(std::move(s));
  }
  for (const auto& s : j.at("epoch_snapshots")) {
    m.epoch_snapshots.push_back(
        {s.at("epoch").get<int>(), vec_from_json(s.at("theta"))});
  }
  return m;
}

}  // namespace checksel
