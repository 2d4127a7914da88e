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

// Acceptance gate: eight end-to-end criteria with pinned tolerances, one
// PASS/FAIL line each. Run all, or a single one with --criterion cN.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "checksel/datagen.hpp"
#include "checksel/pipeline.hpp"
#include "checksel/rng.hpp"
#include "checksel/selector.hpp"
#include "reference_selector.hpp"

namespace fs = std::filesystem;
using namespace checksel;

namespace {

struct Criterion {
  std::string id;
  std::string name;
  double time_budget_seconds;
  std::function<bool(std::ostream&)> run;
};

fs::path work_dir(const std::string& tag) {
  const auto dir = fs::temp_directory_path() / "checksel_acceptance" / tag;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Eigen::VectorXd random_unit(Rng& rng, Eigen::Index m) {
  Eigen::VectorXd v(m);
  for (Eigen::Index i = 0; i < m; ++i) v[i] = rng.normal();
  return v / v.norm();
}

// --- C1: planted-support recovery ---------------------------------------

bool run_c1(std::ostream& log) {
  constexpr Eigen::Index kDim = 64;
  constexpr int kStream = 50;
  constexpr int kEpochs = 4;
  bool ok = true;
  for (int budget : {2, 4, 8}) {
    int recovered_count = 0;
    double worst_residual = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(budget)));
      std::vector<Eigen::VectorXd> pool;
      pool.reserve(kStream);
      for (int i = 0; i < kStream; ++i) pool.push_back(random_unit(rng, kDim));

      std::vector<int> order(kStream);
      for (int i = 0; i < kStream; ++i) order[static_cast<std::size_t>(i)] = i;
      rng.shuffle(order);
      std::set<int> planted(order.begin(), order.begin() + budget);

      Eigen::VectorXd target = Eigen::VectorXd::Zero(kDim);
      for (int p : planted) {
        target += (1.0 + rng.uniform01()) * pool[static_cast<std::size_t>(p)];
      }

      SelectorState state({budget});
      for (int epoch = 0; epoch < kEpochs; ++epoch) {
        state.advance_epoch(target);
        rng.shuffle(order);
        for (int pos : order) {
          state.offer(CheckpointFeature::from_raw(
              {1, pos + 1}, pool[static_cast<std::size_t>(pos)]));
        }
      }
      std::set<int> got;
      for (const auto& id : state.selected_ids()) got.insert(id.batch - 1);
      const double residual = state.normalized_residual();
      worst_residual = std::max(worst_residual, residual);
      if (got == planted && residual <= 1e-8) ++recovered_count;
    }
    log << "    k=" << budget << ": exact support in " << recovered_count
        << "/20 seeds, worst residual " << worst_residual << "\n";
    ok = ok && recovered_count == 20 && worst_residual <= 1e-8;
  }
  return ok;
}

// --- C2: residual dominance over uniform selection ----------------------

bool run_c2(std::ostream& log) {
  const auto dir = work_dir("c2");
  std::vector<double> ratios;
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GenDataOptions g;
    g.num_classes = 2;
    g.train_count = 500;
    g.val_count = 100;
    g.test_count = 10;
    g.dim = 20;
    g.label_noise = 0.1;
    g.class_sep = 2.5;
    g.feature_scale = 0.1;
    g.seed = seed;
    g.out_dir = (dir / std::to_string(seed)).string();
    const auto data = gen_data(g);

    TrainOptions t;
    t.train_path = data.train_path;
    t.val_path = data.val_path;
    t.mode = SelectionMode::kChecksel;
    t.budget = 10;
    t.config = {20, 50, 10.0, seed, true};  // T=20, O=10
    t.manifest_path = (fs::path(g.out_dir) / "checksel.json").string();
    train_run(t);

    TrainOptions u = t;
    u.mode = SelectionMode::kUniform;
    u.manifest_path = (fs::path(g.out_dir) / "uniform.json").string();
    train_run(u);

    ResidualReportOptions r;
    r.manifest_paths = {t.manifest_path, u.manifest_path};
    const auto report = residual_report(r);
    const double checksel_final = report.curves[0].back();
    const double uniform_final = report.curves[1].back();
    ratios.push_back(checksel_final / uniform_final);
    if (checksel_final < uniform_final) ++wins;
  }
  std::sort(ratios.begin(), ratios.end());
  const double median = (ratios[9] + ratios[10]) / 2.0;
  log << "    checksel < uniform in " << wins << "/20 seeds (need >= 18); "
      << "median ratio " << median << " (need <= 0.8)\n";
  return wins >= 18 && median <= 0.8;
}

// --- C3: subset quality under 20% label noise ---------------------------

bool run_c3(std::ostream& log) {
  const auto dir = work_dir("c3");
  double top_mean = 0.0, simsel_mean = 0.0, random_mean = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    GenDataOptions g;
    g.num_classes = 2;
    g.components_per_class = 3;
    g.train_count = 600;
    g.val_count = 60;
    g.test_count = 400;
    g.dim = 12;
    g.label_noise = 0.2;
    g.class_sep = 2.0;
    g.feature_scale = 0.1;
    g.seed = seed;
    g.out_dir = (dir / std::to_string(seed)).string();
    const auto data = gen_data(g);

    TrainOptions t;
    t.train_path = data.train_path;
    t.val_path = data.val_path;
    t.mode = SelectionMode::kChecksel;
    t.budget = 10;
    t.config = {5, 200, 1.0, seed, true};
    t.manifest_path = (fs::path(g.out_dir) / "m.json").string();
    train_run(t);

    ValueOptions v;
    v.manifest_path = t.manifest_path;
    v.values_path = (fs::path(g.out_dir) / "values.csv").string();
    v.contribs_path = (fs::path(g.out_dir) / "contribs.bin").string();
    value_run(v);

    SelectOptions top;
    top.values_path = v.values_path;
    top.subset_size = 60;  // 10% of the training split
    top.subset_path = (fs::path(g.out_dir) / "top.txt").string();
    select_run(top);

    SelectOptions simsel = top;
    simsel.mode = "simsel";
    simsel.contribs_path = v.contribs_path;
    simsel.pool = 240;
    simsel.subset_path = (fs::path(g.out_dir) / "simsel.txt").string();
    select_run(simsel);

    RetrainOptions r;
    r.train_path = data.train_path;
    r.test_path = data.test_path;
    r.model_kind = ModelKind::kMlp;
    r.hidden = 16;
    r.config = {60, 30, 1.0, seed, true};
    r.control_draws = 5;
    r.subset_path = top.subset_path;
    const auto rep_top = retrain_report(r);
    r.subset_path = simsel.subset_path;
    const auto rep_simsel = retrain_report(r);

    top_mean += rep_top.subset_accuracy / 5.0;
    simsel_mean += rep_simsel.subset_accuracy / 5.0;
    random_mean += rep_top.control_mean / 5.0;
  }
  const double margin = (top_mean - random_mean) * 100.0;
  const double simsel_gap = (simsel_mean - top_mean) * 100.0;
  log << "    mean accuracy: checksel-top " << top_mean << ", checksel-simsel "
      << simsel_mean << ", random " << random_mean << "\n";
  log << "    top-vs-random margin " << margin
      << "pt (need >= 2); simsel-vs-top " << simsel_gap
      << "pt (need >= -1)\n";
  return margin >= 2.0 && simsel_gap >= -1.0;
}

// --- C4: gradient fidelity against central differences ------------------

bool run_c4(std::ostream& log) {
  Rng rng(404);
  double worst = 0.0;
  for (ModelKind kind : {ModelKind::kLogistic, ModelKind::kMlp}) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto d = static_cast<Eigen::Index>(2 + rng.below(6));
      const auto h = static_cast<Eigen::Index>(2 + rng.below(5));
      const int classes = static_cast<int>(2 + rng.below(3));
      ModelParams m = init_params(kind, {d, h, classes}, rng.next());
      m.theta *= 0.5;
      Eigen::VectorXd x(d);
      for (Eigen::Index j = 0; j < d; ++j) x[j] = rng.normal();
      const int y =
          static_cast<int>(rng.below(static_cast<std::uint64_t>(classes)));

      const Eigen::VectorXd analytic = sample_loss_grad(m, x, y).grad;
      Eigen::VectorXd fd(m.theta.size());
      ModelParams probe = m;
      for (Eigen::Index p = 0; p < m.theta.size(); ++p) {
        probe.theta = m.theta;
        probe.theta[p] += 1e-5;
        const double up = sample_loss(probe, x, y);
        probe.theta[p] = m.theta[p] - 1e-5;
        const double down = sample_loss(probe, x, y);
        fd[p] = (up - down) / 2e-5;
      }
      worst = std::max(
          worst, (analytic - fd).norm() / std::max(1e-12, fd.norm()));
    }
  }
  log << "    worst relative error over 200 (model, sample) pairs: " << worst
      << " (need <= 1e-5)\n";
  return worst <= 1e-5;
}

// --- C5: second-order expansion fidelity ---------------------------------

bool run_c5(std::ostream& log) {
  const Eigen::MatrixXd means = mixture_means({2, 1, 4, 1.0, 29});
  Dataset train = sample_mixture(means, 1, 16, 0.0, 29, 1);
  Dataset val = sample_mixture(means, 1, 8, 0.0, 29, 2);
  train.features /= train.features.cwiseAbs().maxCoeff();
  val.features /= val.features.cwiseAbs().maxCoeff();
  const ModelShape shape{4, 0, 2};
  const ModelParams init = init_params(ModelKind::kLogistic, shape, 29);

  bool ok = true;
  double previous = -1.0;
  for (const double eta : {1e-4, 1e-3, 1e-2, 1e-1}) {
    TrainRunConfig config{1, 4, eta, 29, false};
    const auto schedule = make_schedule(16, 4, 1, config.seed, false);
    double gap = 0.0;
    train_with_hooks(train, val, config, schedule, init,
                     [&](const StepRecord& r) {
                       ModelParams at{ModelKind::kLogistic, shape,
                                      r.theta_before};
                       gap = std::max(
                           gap,
                           taylor_fidelity(r, val_gradient_matrix(at, val),
                                           eta)
                               .gap);
                     });
    log << "    eta=" << eta << ": max |predicted - actual| = " << gap << "\n";
    if (eta == 1e-4 && gap > 1e-6) ok = false;
    if (gap <= previous) ok = false;  // must grow strictly with eta
    previous = gap;
  }
  return ok;
}

// --- C6: facility-location greedy vs exhaustive --------------------------

double exhaustive_best(const Eigen::MatrixXd& d, int f) {
  const auto n = static_cast<int>(d.rows());
  std::vector<int> pick(static_cast<std::size_t>(f));
  double best = std::numeric_limits<double>::infinity();
  const std::function<void(int, int)> walk = [&](int start, int chosen) {
    if (chosen == f) {
      best = std::min(best, facility_location_objective(d, pick));
      return;
    }
    for (int c = start; c < n; ++c) {
      pick[static_cast<std::size_t>(chosen)] = c;
      walk(c + 1, chosen + 1);
    }
  };
  walk(0, 0);
  return best;
}

bool run_c6(std::ostream& log) {
  // Recorded regression gap for this frozen suite; the median ratio is 1.0
  // and the worst observed 1.4122.
  constexpr double kRecordedGap = 1.45;
  Rng rng(2024);
  double worst_ratio = 1.0;
  double greedy_total = 0.0, optimum_total = 0.0;
  int optimal_hits = 0, usable = 0;
  bool sound = true;
  for (int instance = 0; instance < 200; ++instance) {
    const int n = 4 + static_cast<int>(rng.below(5));
    const int f = std::min(n, 1 + static_cast<int>(rng.below(3)));
    Eigen::MatrixXd contribs(n, 6);
    for (Eigen::Index i = 0; i < contribs.size(); ++i) {
      contribs(i / 6, i % 6) = rng.normal();
    }
    const Eigen::MatrixXd d = dissimilarity_matrix(contribs);
    const auto greedy = facility_location_select(d, f);
    const double optimum = exhaustive_best(d, f);
    greedy_total += greedy.objective;
    optimum_total += optimum;
    sound = sound && greedy.objective >= optimum - 1e-12;
    if (optimum > 1e-12) {
      ++usable;
      const double ratio = greedy.objective / optimum;
      worst_ratio = std::max(worst_ratio, ratio);
      if (ratio <= 1.0 + 1e-12) ++optimal_hits;
    }
  }
  log << "    200 instances: greedy objective total " << greedy_total
      << ", exhaustive total " << optimum_total << "\n";
  log << "    greedy exactly optimal on " << optimal_hits << "/" << usable
      << "; worst ratio " << worst_ratio << " (recorded gap "
      << kRecordedGap << ")\n";
  return sound && worst_ratio <= kRecordedGap;
}

// --- C7: valuation cost structure ----------------------------------------

bool run_c7(std::ostream& log) {
  const auto dir = work_dir("c7");
  GenDataOptions g;
  g.num_classes = 2;
  g.train_count = 200;
  g.val_count = 40;
  g.test_count = 10;
  g.dim = 10;
  g.class_sep = 2.5;
  g.feature_scale = 0.1;
  g.seed = 7;
  g.out_dir = dir.string();
  const auto data = gen_data(g);

  bool ok = true;
  log << "    checksel (N=200, M=40): per-membership cost must stay M+1=41\n";
  for (int budget : {5, 10, 20}) {
    TrainOptions t;
    t.train_path = data.train_path;
    t.val_path = data.val_path;
    t.mode = SelectionMode::kChecksel;
    t.budget = budget;
    t.config = {20, 20, 1.0, 7, true};
    t.manifest_path = (dir / ("c" + std::to_string(budget) + ".json")).string();
    const RunManifest m = train_run(t);

    ValueOptions v;
    v.manifest_path = t.manifest_path;
    const auto result = value_run(v);

    std::uint64_t memberships = 0;
    for (const auto& cp : m.selected) memberships += cp.batch_members.size();
    const std::uint64_t expected = memberships * (40 + 1);
    log << "      k=" << budget << ": grad_evals=" << result.grad_evals
        << " = " << memberships << " memberships * 41 -> "
        << (result.grad_evals == expected ? "exact" : "MISMATCH") << "\n";
    ok = ok && result.grad_evals == expected;
  }

  log << "    tracin: evals must grow linearly, (N+M)=240 per snapshot\n";
  for (int snapshots : {5, 10, 20}) {
    TrainOptions t;
    t.train_path = data.train_path;
    t.val_path = data.val_path;
    t.mode = SelectionMode::kUniform;
    t.budget = snapshots;
    t.config = {20, 20, 1.0, 7, true};
    t.manifest_path = (dir / ("u" + std::to_string(snapshots) + ".json")).string();
    train_run(t);

    ValueOptions v;
    v.manifest_path = t.manifest_path;
    v.method = "tracin";
    const auto result = value_run(v);
    const auto expected = static_cast<std::uint64_t>(snapshots) * (200 + 40);
    log << "      snapshots=" << snapshots << ": grad_evals="
        << result.grad_evals << " -> "
        << (result.grad_evals == expected ? "exact" : "MISMATCH") << "\n";
    ok = ok && result.grad_evals == expected;
  }
  return ok;
}

// --- C8: trace conformance under fuzzing ----------------------------------

bool run_c8(std::ostream& log) {
  constexpr Eigen::Index kDim = 12;
  Rng rng(0x8888);
  std::uint64_t offers = 0, replays = 0;
  bool ok = true;
  for (int sequence = 0; sequence < 10000 && ok; ++sequence) {
    const int budget = 1 + static_cast<int>(rng.below(4));
    SelectorState state({budget});
    checksel_test::ReferenceSelector reference(budget, 1e-12);

    Eigen::VectorXd target(kDim);
    const int epochs = 1 + static_cast<int>(rng.below(3));
    int id = 0;
    for (int epoch = 0; epoch < epochs && ok; ++epoch) {
      for (Eigen::Index i = 0; i < kDim; ++i) target[i] = 3.0 * rng.normal();
      state.advance_epoch(target);
      reference.set_target(target);
      const int volley = 4 + static_cast<int>(rng.below(8));
      for (int offer = 0; offer < volley; ++offer) {
        const auto f = CheckpointFeature::from_raw(
            {epoch + 1, ++id}, random_unit(rng, kDim) * (0.5 + rng.uniform01()));
        const auto got = state.offer(f);
        const auto want = reference.offer(f);
        ++offers;

        // Budget.
        if (state.size() > budget) ok = false;

        // Estimate coherence from scratch.
        const auto set = state.finalize();
        Eigen::VectorXd scratch = Eigen::VectorXd::Zero(kDim);
        for (const auto& e : set.entries) scratch += e.alpha * e.unit;
        if ((scratch - state.estimate()).cwiseAbs().maxCoeff() > 1e-9) {
          ok = false;
        }

        // Refit orthogonality (ridge runs excepted).
        if (state.size() > 0 && !state.last_refit_used_ridge()) {
          const Eigen::VectorXd residual = state.target() - state.estimate();
          for (const auto& e : set.entries) {
            if (std::abs(e.unit.dot(residual)) > 1e-8) ok = false;
          }
        }

        // Decision replay through the straight-line transcription.
        bool match = false;
        switch (want.kind) {
          case checksel_test::RefDecision::Kind::kAppended:
            match = got.action == OfferAction::kAppended;
            break;
          case checksel_test::RefDecision::Kind::kReplaced:
            match = got.action == OfferAction::kReplaced &&
                    got.removed.has_value() && *got.removed == *want.removed;
            break;
          case checksel_test::RefDecision::Kind::kRejected:
            match = got.action == OfferAction::kRejected;
            break;
        }
        if (match) {
          ++replays;
        } else {
          ok = false;
          log << "    divergence at sequence " << sequence << " offer "
              << offers << "\n";
        }
      }
      if (state.selected_ids() != reference.ids()) ok = false;
    }
  }
  log << "    " << offers << " fuzzed offers across 10000 sequences; "
      << replays << " decisions replayed identically\n";
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = argv[++i];
    } else if (std::strcmp(argv[i], "--list") == 0) {
      std::cout << "c1 c2 c3 c4 c5 c6 c7 c8\n";
      return 0;
    }
  }

  const std::vector<Criterion> criteria = {
      {"c1", "planted-support recovery (k in {2,4,8}, 20 seeds)", 5.0, run_c1},
      {"c2", "residual dominance over uniform selection (20 seeds)", 120.0,
       run_c2},
      {"c3", "subset quality under 20% label noise (5 seeds)", 180.0, run_c3},
      {"c4", "gradient fidelity vs central differences", 60.0, run_c4},
      {"c5", "second-order expansion fidelity across eta", 60.0, run_c5},
      {"c6", "facility-location greedy vs exhaustive (200 instances)", 10.0,
       run_c6},
      {"c7", "valuation cost structure (counters)", 120.0, run_c7},
      {"c8", "selector trace conformance (10^4 fuzzed sequences)", 60.0,
       run_c8},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (!only.empty() && criterion.id != only) continue;
    std::ostringstream log;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = criterion.run(log);
    } catch (const std::exception& e) {
      log << "    exception: " << e.what() << "\n";
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const bool in_budget = seconds <= criterion.time_budget_seconds;
    const bool pass = ok && in_budget;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << criterion.id << " "
              << criterion.name << " (" << seconds << "s";
    if (!in_budget) {
      std::cout << ", over the " << criterion.time_budget_seconds
                << "s budget";
    }
    std::cout << ")\n" << log.str();
    if (!pass) ++failures;
  }
  if (only.empty()) {
    std::cout << (failures == 0 ? "all criteria passed\n"
                                : std::to_string(failures) +
                                      " criteria failed\n");
  }
  return failures;
}
