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

#include "checksel/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <map>
#include <stdexcept>

#include "checksel/datagen.hpp"
#include "checksel/rng.hpp"
#include "checksel/selector.hpp"

namespace checksel {

namespace {

constexpr std::uint64_t kInitStream = 0x1217;

std::string dataset_path(const GenDataOptions& o, const char* split) {
  const char* ext = o.format == "raw" ? ".bin" : ".csv";
  return (std::filesystem::path(o.out_dir) /
          (o.basename + "_" + split + ext))
      .string();
}

void write_split(const std::string& path, const Dataset& data,
                 const std::string& format) {
  if (format == "raw") {
    write_dataset_raw(path, data);
  } else if (format == "csv") {
    write_dataset_csv(path, data);
  } else {
    throw std::invalid_argument("unknown dataset format: " + format);
  }
}

struct LoadedRun {
  Dataset train;
  Dataset val;
};

LoadedRun load_run_data(const std::string& train_path,
                        const std::string& val_path, int num_classes) {
  LoadedRun d;
  d.train = read_dataset(train_path);
  d.train.split = SplitTag::kTrain;
  d.val = read_dataset(val_path);
  d.val.split = SplitTag::kValidation;
  const int classes =
      std::max({num_classes, d.train.num_classes, d.val.num_classes});
  d.train.num_classes = classes;
  d.val.num_classes = classes;
  return d;
}

ModelParams fit_plain(const Dataset& data, const TrainRunConfig& config,
                      ModelKind kind, const ModelShape& shape) {
  const auto schedule =
      make_schedule(static_cast<int>(data.size()), config.batch_size,
                    config.epochs, config.seed, config.shuffle);
  ModelParams params =
      init_params(kind, shape, mix_seed(config.seed, kInitStream));
  for (const auto& epoch : schedule.epochs) {
    for (const auto& members : epoch) {
      LossGrad sum = loss_and_grad(params, members, data, Reduction::kSum);
      const Eigen::VectorXd mean_grad =
          sum.grad * (1.0 / static_cast<double>(members.size()));
      params.theta = params.theta - config.learning_rate * mean_grad;
    }
  }
  return params;
}

std::string histogram_comment(const std::vector<ValueRecord>& records) {
  if (records.empty()) return "histogram empty";
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    lo = std::min(lo, r.value);
    hi = std::max(hi, r.value);
  }
  constexpr int kBins = 10;
  std::vector<int> bins(kBins, 0);
  const double width = hi > lo ? (hi - lo) / kBins : 1.0;
  for (const auto& r : records) {
    int b = static_cast<int>((r.value - lo) / width);
    bins[std::clamp(b, 0, kBins - 1)]++;
  }
  std::string out = "histogram min=" + format_double(lo) +
                    " max=" + format_double(hi) + " counts=";
  for (int b = 0; b < kBins; ++b) {
    if (b > 0) out += '|';
    out += std::to_string(bins[static_cast<std::size_t>(b)]);
  }
  return out;
}

}  // namespace

std::vector<int> uniform_checkpoint_epochs(int epochs, int k) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    out.push_back(static_cast<int>(
        static_cast<long long>(j) * epochs / k));
  }
  return out;
}

GenDataResult gen_data(const GenDataOptions& options) {
  if (options.train_count < 1) {
    throw std::invalid_argument("gen-data requires a positive train count");
  }
  if (options.label_noise < 0.0 || options.label_noise >= 1.0) {
    throw std::invalid_argument("label noise must be in [0, 1)");
  }
  GenDataOptions o = options;
  if (o.val_count == 0) o.val_count = std::max(1, o.train_count / 5);
  if (o.test_count == 0) o.test_count = std::max(1, o.train_count / 5);

  std::filesystem::create_directories(o.out_dir);
  const Eigen::MatrixXd means = mixture_means(
      {o.num_classes, o.components_per_class, o.dim, o.class_sep, o.seed});

  Dataset train = sample_mixture(means, o.components_per_class,
                                 o.train_count, o.label_noise, o.seed, 1);
  train.split = SplitTag::kTrain;
  Dataset val = sample_mixture(means, o.components_per_class, o.val_count,
                               0.0, o.seed, 2);
  val.split = SplitTag::kValidation;
  Dataset test = sample_mixture(means, o.components_per_class,
                                o.test_count, 0.0, o.seed, 3);
  test.split = SplitTag::kValidation;
  if (o.feature_scale != 1.0) {
    scale_features(train, o.feature_scale);
    scale_features(val, o.feature_scale);
    scale_features(test, o.feature_scale);
  }

  GenDataResult result;
  result.train_path = dataset_path(o, "train");
  result.val_path = dataset_path(o, "val");
  result.test_path = dataset_path(o, "test");
  write_split(result.train_path, train, o.format);
  write_split(result.val_path, val, o.format);
  write_split(result.test_path, test, o.format);
  return result;
}

RunManifest train_run(const TrainOptions& options) {
  options.config.validate();
  if (options.budget < 1) {
    throw std::invalid_argument("checkpoint budget k must be >= 1");
  }
  auto data = load_run_data(options.train_path, options.val_path, 0);
  const ModelShape shape{data.train.dim(), options.hidden,
                         data.train.num_classes};
  const auto schedule = make_schedule(
      static_cast<int>(data.train.size()), options.config.batch_size,
      options.config.epochs, options.config.seed, options.config.shuffle);
  const int steps_per_epoch = schedule.batches_per_epoch();
  const int total = options.config.epochs * steps_per_epoch;
  if (options.mode == SelectionMode::kChecksel && options.budget > total) {
    throw std::invalid_argument(
        "k exceeds the number of checkpoints T*O = " + std::to_string(total));
  }
  if (options.mode != SelectionMode::kChecksel &&
      options.budget > options.config.epochs) {
    throw std::invalid_argument("k exceeds the number of epochs");
  }

  const ModelParams init = init_params(
      options.model_kind, shape, mix_seed(options.config.seed, kInitStream));

  RunManifest manifest;
  manifest.mode = options.mode;
  manifest.model_kind = options.model_kind;
  manifest.shape = shape;
  manifest.config = options.config;
  manifest.train_path = options.train_path;
  manifest.val_path = options.val_path;
  manifest.schedule_digest = schedule.digest();

  const bool checksel = options.mode == SelectionMode::kChecksel;
  const bool want_data_map = !options.data_map_path.empty();
  const bool keep_epoch_thetas = !checksel || want_data_map;

  std::ofstream feature_dump;
  if (!options.feature_dump_path.empty()) {
    feature_dump.open(options.feature_dump_path);
    if (!feature_dump) {
      throw std::runtime_error("cannot write feature dump: " +
                               options.feature_dump_path);
    }
  }

  SelectorState selector({options.budget});
  DeltaSeries series;
  Eigen::VectorXd prev_loss = validation_loss_vector(init, data.val);

  struct PendingFeature {
    CheckpointFeature feature;
    std::vector<int> members;
    Eigen::VectorXd snapshot;
  };
  std::vector<PendingFeature> epoch_buffer;
  std::map<std::pair<int, int>, std::pair<std::vector<int>, Eigen::VectorXd>>
      retained;
  std::vector<std::pair<int, Eigen::VectorXd>> epoch_thetas;

  StepHook step_hook;
  if (checksel) {
    step_hook = [&](const StepRecord& rec) {
      ModelParams at{options.model_kind, shape, rec.theta_before};
      const Eigen::MatrixXd vg = val_gradient_matrix(at, data.val);
      Eigen::VectorXd raw = checkpoint_feature(rec.batch_grad_sum, vg);
      CheckpointId id{rec.epoch, rec.batch};
      if (feature_dump.is_open()) {
        nlohmann::json line = {{"epoch", rec.epoch},
                               {"batch", rec.batch},
                               {"norm", raw.norm()},
                               {"members", rec.members},
                               {"raw", std::vector<double>(
                                           raw.data(), raw.data() + raw.size())}};
        feature_dump << line.dump() << '\n';
      }
      epoch_buffer.push_back({CheckpointFeature::from_raw(id, std::move(raw)),
                              rec.members, rec.theta_before});
    };
  }

  EpochEndHook epoch_hook = [&](int epoch, const ModelParams& params,
                                const Eigen::VectorXd& val_loss) {
    if (keep_epoch_thetas) {
      epoch_thetas.emplace_back(epoch, params.theta);
    }
    if (!checksel) return;
    series.append(delta_epoch(prev_loss, val_loss));
    prev_loss = val_loss;
    selector.advance_epoch(series.latest_target());
    for (auto& pf : epoch_buffer) {
      const ReplacementDecision decision = selector.offer(pf.feature);
      if (decision.action == OfferAction::kAppended ||
          decision.action == OfferAction::kReplaced) {
        retained[{pf.feature.id.epoch, pf.feature.id.batch}] = {
            std::move(pf.members), std::move(pf.snapshot)};
      }
      if (decision.action == OfferAction::kReplaced) {
        retained.erase({decision.removed->epoch, decision.removed->batch});
      }
    }
    epoch_buffer.clear();
    manifest.residual_curve.push_back(selector.normalized_residual());
  };

  TrainResult result =
      train_with_hooks(data.train, data.val, options.config, schedule, init,
                       step_hook, epoch_hook);

  manifest.initial_val_loss = result.initial_val_loss;
  manifest.epoch_val_loss = result.epoch_val_loss;
  manifest.final_theta = result.params.theta;

  if (checksel) {
    const SelectedCheckpointSet set = selector.finalize();
    for (const auto& entry : set.entries) {
      auto it = retained.find({entry.id.epoch, entry.id.batch});
      if (it == retained.end()) {
        throw std::logic_error("selected checkpoint lost its snapshot");
      }
      SelectedCheckpoint cp;
      cp.id = entry.id;
      cp.alpha = entry.alpha;
      cp.scale = entry.scale;
      cp.unit_feature = entry.unit;
      cp.batch_members = it->second.first;
      cp.snapshot = it->second.second;
      manifest.selected.push_back(std::move(cp));
    }
  } else {
    std::vector<int> chosen;
    if (options.mode == SelectionMode::kUniform) {
      chosen = uniform_checkpoint_epochs(options.config.epochs,
                                         options.budget);
    } else {
      // Rank epochs by the norm of their validation-loss change.
      std::vector<std::pair<double, int>> ranked;
      Eigen::VectorXd before = manifest.initial_val_loss;
      for (int t = 1; t <= options.config.epochs; ++t) {
        const auto& after =
            manifest.epoch_val_loss[static_cast<std::size_t>(t - 1)];
        ranked.emplace_back(delta_epoch(before, after).norm(), t);
        before = after;
      }
      std::stable_sort(ranked.begin(), ranked.end(),
                       [](const auto& a, const auto& b) {
                         if (a.first != b.first) return a.first > b.first;
                         return a.second < b.second;
                       });
      for (int j = 0; j < options.budget; ++j) {
        chosen.push_back(ranked[static_cast<std::size_t>(j)].second);
      }
      std::sort(chosen.begin(), chosen.end());
    }
    for (int epoch : chosen) {
      manifest.epoch_snapshots.push_back(
          {epoch, epoch_thetas[static_cast<std::size_t>(epoch - 1)].second});
    }
  }

  if (want_data_map) {
    const ConfidenceMap map = confidence_map(epoch_thetas, options.model_kind,
                                             shape, data.train);
    std::ofstream out(options.data_map_path);
    if (!out) {
      throw std::runtime_error("cannot write data map: " +
                               options.data_map_path);
    }
    out << "index,confidence,mean_loss\n";
    for (Eigen::Index i = 0; i < map.confidence.size(); ++i) {
      out << i << ',' << format_double(map.confidence[i]) << ','
          << format_double(map.mean_loss[i]) << '\n';
    }
  }

  if (!options.manifest_path.empty()) {
    manifest.save(options.manifest_path);
  }
  return manifest;
}

ValueRunResult value_run(const ValueOptions& options) {
  const RunManifest m = RunManifest::load(options.manifest_path);
  const std::string train_path = options.train_path_override.empty()
                                     ? m.train_path
                                     : options.train_path_override;
  const std::string val_path = options.val_path_override.empty()
                                   ? m.val_path
                                   : options.val_path_override;
  auto data = load_run_data(train_path, val_path, m.shape.num_classes);
  if (data.train.num_classes > m.shape.num_classes) {
    throw std::runtime_error("dataset has labels outside the trained model");
  }
  data.train.num_classes = m.shape.num_classes;
  data.val.num_classes = m.shape.num_classes;

  EvalCounter counter;
  ValueRunResult result;
  std::vector<std::string> comments;
  comments.push_back("manifest=" + options.manifest_path);
  comments.push_back("schedule_digest=" + std::to_string(m.schedule_digest));
  comments.push_back("method=" + options.method);

  if (options.method == "checksel") {
    if (m.mode != SelectionMode::kChecksel || m.selected.empty()) {
      throw std::runtime_error(
          "manifest/method mismatch: checksel valuation needs a checksel "
          "manifest with selected checkpoints");
    }
    // The manifest's coefficients live in fit space, where the target is the
    // signed loss change (negative once training helps). Emitted values
    // measure the contribution to the loss DECREASE so that higher means
    // more helpful and the scale matches the tracin method; that flips the
    // coefficient sign here, at the convention boundary.
    std::vector<SelectedCheckpoint> decrease_space = m.selected;
    for (auto& cp : decrease_space) cp.alpha = -cp.alpha;
    ValuationResult vr = value_scores(decrease_space, m.model_kind, m.shape,
                                      data.train, data.val, &counter);
    const ModelParams final_model{m.model_kind, m.shape, m.final_theta};
    result.records =
        propagate_values(vr.records, embedding_matrix(final_model, data.train));
    result.direct_count = vr.records.size();
    result.propagated_count = result.records.size() - vr.records.size();
    if (!options.contribs_path.empty()) {
      write_contribs(options.contribs_path, vr.contribs);
    }
  } else if (options.method == "tracin") {
    if (m.epoch_snapshots.empty()) {
      throw std::runtime_error(
          "manifest/method mismatch: tracin needs end-of-epoch snapshots "
          "(train with --mode uniform or loss-gap)");
    }
    std::vector<std::pair<int, Eigen::VectorXd>> snapshots;
    for (const auto& s : m.epoch_snapshots) {
      snapshots.emplace_back(s.epoch, s.theta);
    }
    const std::vector<double> etas(snapshots.size(),
                                   m.config.learning_rate);
    const Eigen::VectorXd values =
        tracin_scores(snapshots, etas, m.model_kind, m.shape, data.train,
                      data.val, &counter);
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      ValueRecord rec;
      rec.index = static_cast<int>(i);
      rec.value = values[i];
      rec.source = ValueRecord::Source::kDirect;
      result.records.push_back(std::move(rec));
    }
    result.direct_count = result.records.size();
  } else {
    throw std::invalid_argument("unknown valuation method: " + options.method);
  }

  result.grad_evals = counter.sample_grad_evals;
  comments.push_back("grad_evals=" + std::to_string(result.grad_evals));
  comments.push_back(histogram_comment(result.records));
  if (!options.values_path.empty()) {
    write_values_csv(options.values_path, result.records, comments);
  }
  return result;
}

SubsetResult select_run(const SelectOptions& options) {
  if (options.subset_size < 1) {
    throw std::invalid_argument("subset size f must be >= 1");
  }
  const auto records = read_values_csv(options.values_path);
  if (records.empty()) {
    throw std::runtime_error("values file has no records: " +
                             options.values_path);
  }

  SubsetResult result;
  if (options.mode == "top") {
    if (options.subset_size > static_cast<int>(records.size())) {
      throw std::invalid_argument("subset size exceeds candidate count");
    }
    std::vector<const ValueRecord*> order;
    order.reserve(records.size());
    for (const auto& r : records) order.push_back(&r);
    std::sort(order.begin(), order.end(),
              [](const ValueRecord* a, const ValueRecord* b) {
                if (a->value != b->value) return a->value > b->value;
                return a->index < b->index;
              });
    for (int i = 0; i < options.subset_size; ++i) {
      result.selected.push_back(order[static_cast<std::size_t>(i)]->index);
    }
    std::sort(result.selected.begin(), result.selected.end());
  } else if (options.mode == "simsel") {
    if (options.contribs_path.empty()) {
      throw std::runtime_error("simsel mode requires contrib vectors");
    }
    const auto contribs = read_contribs(options.contribs_path);
    if (contribs.empty()) {
      throw std::runtime_error("contrib file has no records");
    }
    std::map<int, double> value_of;
    for (const auto& r : records) value_of[r.index] = r.value;

    std::vector<const ContribVector*> order;
    order.reserve(contribs.size());
    for (const auto& c : contribs) {
      if (value_of.find(c.index) == value_of.end()) {
        throw std::runtime_error("values file missing index " +
                                 std::to_string(c.index));
      }
      order.push_back(&c);
    }
    std::sort(order.begin(), order.end(),
              [&](const ContribVector* a, const ContribVector* b) {
                const double va = value_of[a->index];
                const double vb = value_of[b->index];
                if (va != vb) return va > vb;
                return a->index < b->index;
              });
    if (options.pool > 0 &&
        options.pool < static_cast<int>(order.size())) {
      if (options.pool < options.subset_size) {
        throw std::invalid_argument("pool smaller than subset size");
      }
      order.resize(static_cast<std::size_t>(options.pool));
    }

    std::vector<int> ids;
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(order.size()),
                         order.front()->contrib.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
      ids.push_back(order[r]->index);
      rows.row(static_cast<Eigen::Index>(r)) = order[r]->contrib;
    }
    const int stream_batch = options.stream_batch > 0
                                 ? options.stream_batch
                                 : 2 * options.subset_size;
    result = simsel_stream(ids, rows, stream_batch, options.subset_size);
  } else {
    throw std::invalid_argument("unknown select mode: " + options.mode);
  }

  if (!options.subset_path.empty()) {
    write_subset(options.subset_path, result);
  }
  return result;
}

RetrainReport retrain_report(const RetrainOptions& options) {
  options.config.validate();
  const auto subset = read_subset(options.subset_path);
  if (subset.empty()) {
    throw std::runtime_error("empty subset: " + options.subset_path);
  }
  Dataset train = read_dataset(options.train_path);
  Dataset test = read_dataset(options.test_path);
  const int classes = std::max(train.num_classes, test.num_classes);
  train.num_classes = classes;
  test.num_classes = classes;
  const ModelShape shape{train.dim(), options.hidden, classes};

  const Dataset picked = subset_of(train, subset);
  TrainRunConfig config = options.config;
  config.batch_size =
      std::min(config.batch_size, static_cast<int>(picked.size()));

  RetrainReport report;
  report.subset_size = subset.size();
  report.subset_accuracy = accuracy(
      fit_plain(picked, config, options.model_kind, shape), test);

  const auto n = static_cast<int>(train.size());
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  for (int draw = 0; draw < options.control_draws; ++draw) {
    Rng rng(mix_seed(options.config.seed,
                     0xc017u + static_cast<std::uint64_t>(draw)));
    std::vector<int> shuffled = all;
    rng.shuffle(shuffled);
    shuffled.resize(subset.size());
    const Dataset control = subset_of(train, shuffled);
    report.control_accuracies.push_back(accuracy(
        fit_plain(control, config, options.model_kind, shape), test));
  }
  double total = 0.0;
  for (double a : report.control_accuracies) total += a;
  report.control_mean = total / static_cast<double>(
                                    report.control_accuracies.size());

  if (!options.report_path.empty()) {
    std::ofstream out(options.report_path);
    if (!out) {
      throw std::runtime_error("cannot write report: " + options.report_path);
    }
    out << "# subset=" << options.subset_path << '\n';
    out << "# train=" << options.train_path << " test=" << options.test_path
        << " model=" << model_kind_name(options.model_kind)
        << " epochs=" << options.config.epochs
        << " batch=" << options.config.batch_size
        << " lr=" << format_double(options.config.learning_rate)
        << " seed=" << options.config.seed << '\n';
    out << "row,size,accuracy\n";
    out << "subset," << report.subset_size << ','
        << format_double(report.subset_accuracy) << '\n';
    for (std::size_t c = 0; c < report.control_accuracies.size(); ++c) {
      out << "control" << c << ',' << report.subset_size << ','
          << format_double(report.control_accuracies[c]) << '\n';
    }
    out << "control_mean," << report.subset_size << ','
        << format_double(report.control_mean) << '\n';
  }
  return report;
}

ResidualReport residual_report(const ResidualReportOptions& options) {
  if (options.manifest_paths.empty()) {
    throw std::invalid_argument("residual report needs at least one manifest");
  }
  std::vector<RunManifest> manifests;
  for (const auto& p : options.manifest_paths) {
    manifests.push_back(RunManifest::load(p));
  }
  const RunManifest& first = manifests.front();
  for (const auto& m : manifests) {
    const bool same = m.config.epochs == first.config.epochs &&
                      m.config.batch_size == first.config.batch_size &&
                      m.config.learning_rate == first.config.learning_rate &&
                      m.config.seed == first.config.seed &&
                      m.config.shuffle == first.config.shuffle &&
                      m.train_path == first.train_path &&
                      m.val_path == first.val_path &&
                      m.model_kind == first.model_kind &&
                      m.schedule_digest == first.schedule_digest;
    if (!same) {
      throw std::runtime_error("manifest config mismatch across modes");
    }
  }

  auto data = load_run_data(first.train_path, first.val_path,
                            first.shape.num_classes);
  std::vector<int> all(static_cast<std::size_t>(data.train.size()));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);

  ResidualReport report;
  for (const auto& m : manifests) {
    report.modes.emplace_back(selection_mode_name(m.mode));
    if (m.mode == SelectionMode::kChecksel) {
      report.curves.push_back(m.residual_curve);
      continue;
    }
    // First-order estimate of the cumulative loss change from the mode's
    // selected end-of-epoch snapshots available by epoch t.
    std::vector<double> curve;
    Eigen::VectorXd estimate =
        Eigen::VectorXd::Zero(m.initial_val_loss.size());
    std::size_t next = 0;
    for (int t = 1; t <= m.config.epochs; ++t) {
      while (next < m.epoch_snapshots.size() &&
             m.epoch_snapshots[next].epoch <= t) {
        const ModelParams at{m.model_kind, m.shape,
                             m.epoch_snapshots[next].theta};
        const Eigen::VectorXd mean_grad =
            loss_and_grad(at, all, data.train, Reduction::kMean).grad;
        estimate += -m.config.learning_rate *
                    (val_gradient_matrix(at, data.val) * mean_grad);
        ++next;
      }
      const Eigen::VectorXd target =
          m.epoch_val_loss[static_cast<std::size_t>(t - 1)] -
          m.initial_val_loss;
      const double norm = target.norm();
      curve.push_back(norm == 0.0
                          ? std::numeric_limits<double>::infinity()
                          : (target - estimate).norm() / norm);
    }
    report.curves.push_back(std::move(curve));
  }

  if (!options.report_path.empty()) {
    std::ofstream out(options.report_path);
    if (!out) {
      throw std::runtime_error("cannot write report: " + options.report_path);
    }
    out << "# manifests=";
    for (std::size_t i = 0; i < options.manifest_paths.size(); ++i) {
      if (i > 0) out << '|';
      out << options.manifest_paths[i];
    }
    out << "\n# uniform/loss-gap estimates use the first-order full-data"
           " formula over each mode's selected end-of-epoch snapshots;"
           " loss-gap ranks epochs by the 2-norm of the per-epoch"
           " validation-loss change\n";
    out << "epoch";
    for (const auto& mode : report.modes) out << ',' << mode;
    out << '\n';
    for (int t = 1; t <= first.config.epochs; ++t) {
      out << t;
      for (const auto& curve : report.curves) {
        out << ',' << format_double(curve[static_cast<std::size_t>(t - 1)]);
      }
      out << '\n';
    }
  }
  return report;
}

}  // namespace checksel
