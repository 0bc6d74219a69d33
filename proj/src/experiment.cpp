#include "distress/experiment.hpp"

#include <algorithm>
#include <chrono>

#include <fmt/format.h>

namespace distress {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t count_correct(const std::vector<Label>& pred, const Dataset& ds) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) c += pred[i] == ds[i].label;
  return c;
}

}  // namespace

std::vector<Label> predict_all(const SvmBundle& b, const Dataset& ds) {
  std::vector<Label> out;
  out.reserve(ds.size());
  for (const auto& s : ds.samples()) out.push_back(predict(b.model, apply_scaler(b.scaler, s).features));
  return out;
}

std::vector<Label> predict_all(const MlpBundle& b, const Dataset& ds) {
  std::vector<Label> out;
  out.reserve(ds.size());
  for (const auto& s : ds.samples()) out.push_back(predict_mlp(b.model, apply_scaler(b.scaler, s).features));
  return out;
}

std::vector<Label> predict_all(const ModelBundle& b, const Dataset& ds) {
  return std::visit([&ds](const auto& m) { return predict_all(m, ds); }, b);
}

SvmBundle fit_svm(const Dataset& train, const KernelSpec& kernel, const TrainConfig& cfg, ScaleRange range,
                  SolverTrace* trace) {
  SvmBundle b;
  b.scaler = fit_scaler(train, range);
  b.model = train_svm(apply_scaler(b.scaler, train), kernel, cfg, trace);
  return b;
}

std::vector<std::uint64_t> default_mlp_seeds() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

std::vector<SeedRun> mlp_seed_sweep(const Dataset& train, const MlpConfig& base,
                                    const std::vector<std::uint64_t>& seeds, ScaleRange range) {
  const auto scaler = fit_scaler(train, range);
  const auto scaled = apply_scaler(scaler, train);
  std::vector<SeedRun> runs;
  for (auto seed : seeds) {
    MlpConfig cfg = base;
    cfg.seed = seed;
    auto [model, trace] = train_mlp(cfg, scaled);
    SeedRun run{seed, {std::move(model), scaler}, std::move(trace), 0, 0.0};
    run.train_correct = count_correct(predict_all(run.bundle, train), train);
    run.train_rms = rms_error(run.bundle.model, scaled);
    runs.push_back(std::move(run));
  }
  return runs;
}

std::size_t best_seed_index(const std::vector<SeedRun>& runs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    const auto& a = runs[i];
    const auto& b = runs[best];
    if (a.train_correct > b.train_correct || (a.train_correct == b.train_correct && a.train_rms < b.train_rms)) {
      best = i;
    }
  }
  return best;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult r(bundled_training_set(), bundled_testing_set());

  auto svm_cfg = cfg.svm_train;
  svm_cfg.C = cfg.svm_C;
  const auto kernel = KernelSpec::rbf(cfg.svm_gamma);

  const auto t0 = Clock::now();
  r.svm = fit_svm(r.train, kernel, svm_cfg, cfg.scale_range, &r.svm_trace);
  r.svm_train_report = evaluate(predict_all(r.svm, r.train), r.train.labels());
  r.svm_seconds = seconds_since(t0);
  r.svm_kkt = kkt_report(r.svm.model, apply_scaler(r.svm.scaler, r.train));
  r.svm_test_report = evaluate(predict_all(r.svm, r.test), r.test.labels());

  CvOptions cv_opts{cfg.scale_range, cfg.svm_train};
  const auto folds = kfold_split(r.train, cfg.cv_folds, cfg.cv_seed);
  r.svm_cv = cv_accuracy(r.train, kernel, cfg.svm_C, folds, cv_opts);
  if (cfg.grid_search) {
    r.grid = grid_search(r.train, default_c_grid(), default_gamma_grid(), cfg.cv_folds, cfg.cv_seed, cv_opts);
  }

  const auto t1 = Clock::now();
  r.mlp_runs = mlp_seed_sweep(r.train, cfg.mlp, cfg.mlp_seeds, cfg.scale_range);
  for (const auto& run : r.mlp_runs) {
    r.mlp_test_reports.push_back(evaluate(predict_all(run.bundle, r.test), r.test.labels()));
  }
  r.mlp_seconds = seconds_since(t1);
  r.mlp_best = best_seed_index(r.mlp_runs);

  const std::vector<NamedReport> named = {{"SVM", r.svm_test_report},
                                          {"BPN", r.mlp_test_reports.at(r.mlp_best)}};
  r.table = compare(named);
  return r;
}

std::vector<ThresholdCheck> check_thresholds(const ExperimentResult& r) {
  std::vector<ThresholdCheck> checks;
  const auto& svm_tr = r.svm_train_report;
  const auto& svm_te = r.svm_test_report;

  checks.push_back({"svm-training-accuracy", svm_tr.correct() == svm_tr.n && r.svm_seconds < 1.0,
                    fmt::format("{}/{} correct in {:.4f} s (need {}/{} in < 1 s)", svm_tr.correct(), svm_tr.n,
                                r.svm_seconds, svm_tr.n, svm_tr.n)});

  const auto nsv = r.svm.model.support_vectors.size();
  checks.push_back({"svm-support-vectors", nsv >= 7 && nsv <= 11,
                    fmt::format("{} support vectors (need 9 +/- 2)", nsv)});

  checks.push_back({"svm-testing-accuracy", svm_te.type1 == 0 && svm_te.type2 == 0,
                    fmt::format("Type I {}, Type II {}, accuracy {} (need 0, 0, 100%)", svm_te.type1,
                                svm_te.type2, format_percent(svm_te.accuracy))});

  if (r.mlp_runs.empty()) {
    checks.push_back({"bpn-seed-sweep", false, "no seeds were run"});
    return checks;
  }
  const auto& best = r.mlp_runs[r.mlp_best];
  const auto& best_te = r.mlp_test_reports[r.mlp_best];
  std::vector<std::size_t> test_correct;
  for (const auto& rep : r.mlp_test_reports) test_correct.push_back(rep.correct());
  std::sort(test_correct.begin(), test_correct.end());
  const std::size_t m = test_correct.size();
  const double median = m % 2 ? static_cast<double>(test_correct[m / 2])
                              : 0.5 * static_cast<double>(test_correct[m / 2 - 1] + test_correct[m / 2]);
  const std::size_t n_tr = r.train.size();
  const std::size_t n_te = r.test.size();

  checks.push_back({"bpn-best-training-accuracy", best.train_correct + 1 >= n_tr,
                    fmt::format("seed {}: {}/{} (need >= {}/{})", best.seed, best.train_correct, n_tr,
                                n_tr - 1, n_tr)});
  checks.push_back({"bpn-best-testing-accuracy", best_te.correct() + 1 >= n_te && best_te.type1 == 0,
                    fmt::format("seed {}: {}/{}, Type I {}, Type II {} (need >= {}/{} with no Type I)",
                                best.seed, best_te.correct(), n_te, best_te.type1, best_te.type2, n_te - 1,
                                n_te)});
  checks.push_back({"bpn-median-testing-accuracy", median >= static_cast<double>(n_te) - 3.0,
                    fmt::format("median {}/{} over {} seeds (need >= {}/{})", median, n_te, m, n_te - 3, n_te)});
  checks.push_back({"bpn-runtime", r.mlp_seconds < 30.0,
                    fmt::format("{:.3f} s for {} seeds (need < 30 s)", r.mlp_seconds, m)});
  return checks;
}

}  // namespace distress
