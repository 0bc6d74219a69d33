// Command-line front end: train-svm, train-mlp, gridsearch, evaluate, reproduce.
//
// Exit status: 0 on success, 1 for data/training errors and failed
// reproduction thresholds, 2 when an input path cannot be opened.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "distress/dataset.hpp"
#include "distress/error.hpp"
#include "distress/eval.hpp"
#include "distress/experiment.hpp"
#include "distress/kernel.hpp"
#include "distress/mlp.hpp"
#include "distress/modelsel.hpp"
#include "distress/serialization.hpp"
#include "distress/svm.hpp"

namespace fs = std::filesystem;
using namespace distress;

namespace {

struct CommonOptions {
  std::string data;
  std::string out = "out";
  std::string format = "json";
};

struct SvmOptions {
  std::string kernel;
  double C = 1.0;
  std::optional<double> gamma;
  std::uint64_t seed = 0;
};

struct MlpOptions {
  std::vector<std::uint64_t> seeds = default_mlp_seeds();
  double eta = 0.7;
  double momentum = 0.3;
  std::size_t hidden = 4;
  std::size_t max_epochs = 10000;
  double rms_target = 0.01;
};

struct GridOptions {
  std::size_t k = 3;
  std::uint64_t seed = 0;
  std::vector<double> c_grid = default_c_grid();
  std::vector<double> gamma_grid = default_gamma_grid();
};

struct EvalOptions {
  std::string model;
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << text;
}

fs::path prepare_out(const std::string& out) {
  fs::create_directories(out);
  return fs::path(out);
}

Dataset load_input(const std::string& path) {
  if (path.empty()) return bundled_training_set();
  if (!fs::exists(path)) throw IoError(fmt::format("input file not found: '{}'", path));
  return load_csv(path);
}

KernelSpec resolve_kernel(const SvmOptions& o) {
  if (!o.kernel.empty()) {
    auto spec = parse_kernel_spec(o.kernel);
    if (o.gamma && spec.kind == KernelKind::rbf) spec = KernelSpec::rbf(*o.gamma);
    return spec;
  }
  return KernelSpec::rbf(o.gamma.value_or(0.25));
}

std::string report_text(const std::string& method, const EvaluationReport& r) {
  const std::vector<NamedReport> named = {{method, r}};
  return render_text(compare(named));
}

void write_report(const fs::path& dir, const std::string& stem, const std::string& method,
                  const EvaluationReport& r, const std::string& format) {
  if (format == "json") {
    write_file(dir / (stem + ".json"), to_json(r, method) + "\n");
  } else if (format == "csv") {
    std::ostringstream os;
    write_records_csv(os, r);
    write_file(dir / (stem + ".csv"), os.str());
  } else {
    write_file(dir / (stem + ".txt"), report_text(method, r));
  }
}

int cmd_train_svm(const CommonOptions& c, const SvmOptions& o) {
  const auto ds = load_input(c.data);
  const auto kernel = resolve_kernel(o);
  TrainConfig cfg;
  cfg.C = o.C;
  cfg.seed = o.seed;
  SolverTrace trace;
  const auto bundle = fit_svm(ds, kernel, cfg, {}, &trace);
  const auto report = evaluate(predict_all(bundle, ds), ds.labels());

  const auto dir = prepare_out(c.out);
  save_model(dir / "svm_model.json", bundle);
  write_report(dir, "svm_training_report", "SVM", report, c.format);

  fmt::print("kernel            {}\n", to_string(kernel));
  fmt::print("C                 {}\n", o.C);
  fmt::print("training accuracy {}/{} ({})\n", report.correct(), report.n, format_percent(report.accuracy));
  fmt::print("support vectors   {}\n", bundle.model.support_vectors.size());
  fmt::print("KKT residual      {:.3e}\n", trace.kkt_residual);
  fmt::print("model written to  {}\n", (dir / "svm_model.json").string());
  return 0;
}

int cmd_train_mlp(const CommonOptions& c, const MlpOptions& o) {
  const auto ds = load_input(c.data);
  MlpConfig cfg;
  cfg.n_input = ds.dim();
  cfg.n_hidden = o.hidden;
  cfg.learning_rate = o.eta;
  cfg.momentum = o.momentum;
  cfg.max_epochs = o.max_epochs;
  cfg.rms_target = o.rms_target;
  validate(cfg);
  if (!cfg.learning_rate_recommended()) {
    fmt::print(stderr, "warning: learning rate {} is outside the recommended range 0.6-0.9\n", cfg.learning_rate);
  }
  if (!cfg.momentum_recommended()) {
    fmt::print(stderr, "warning: momentum {} is outside the recommended range 0.1-0.4\n", cfg.momentum);
  }
  if (o.seeds.empty()) throw DataError("at least one seed is required");

  const auto runs = mlp_seed_sweep(ds, cfg, o.seeds);
  const auto best = best_seed_index(runs);
  const auto dir = prepare_out(c.out);

  std::ostringstream summary;
  summary << "seed,train_correct,n,train_rms,epochs,converged\n";
  fmt::print("{:>6} {:>9} {:>12} {:>7} {:>9}\n", "seed", "correct", "rms", "epochs", "converged");
  for (const auto& r : runs) {
    summary << fmt::format("{},{},{},{},{},{}\n", r.seed, r.train_correct, ds.size(), r.train_rms,
                           r.trace.epochs_run, r.trace.converged ? 1 : 0);
    fmt::print("{:>6} {:>6}/{:<2} {:>12.6f} {:>7} {:>9}\n", r.seed, r.train_correct, ds.size(), r.train_rms,
               r.trace.epochs_run, r.trace.converged ? "yes" : "no");
  }
  write_file(dir / "mlp_seeds.csv", summary.str());
  std::ostringstream trace;
  write_trace_csv(trace, runs[best].trace);
  write_file(dir / "mlp_trace.csv", trace.str());
  save_model(dir / "mlp_model.json", runs[best].bundle);

  const auto report = evaluate(predict_all(runs[best].bundle, ds), ds.labels());
  write_report(dir, "mlp_training_report", "BPN", report, c.format);
  fmt::print("best seed {}: training accuracy {}/{} ({})\n", runs[best].seed, report.correct(), report.n,
             format_percent(report.accuracy));
  return 0;
}

int cmd_gridsearch(const CommonOptions& c, const GridOptions& o) {
  const auto ds = load_input(c.data);
  const auto result = grid_search(ds, o.c_grid, o.gamma_grid, o.k, o.seed);
  const auto dir = prepare_out(c.out);
  std::ostringstream os;
  write_grid_csv(os, result);
  write_file(dir / "grid.csv", os.str());
  fmt::print("best C {} gamma {} (mean {}-fold CV accuracy {})\n", result.best_C, result.best_gamma, o.k,
             format_percent(result.best_accuracy));
  return 0;
}

int cmd_evaluate(const CommonOptions& c, const EvalOptions& o) {
  if (!fs::exists(o.model)) throw IoError(fmt::format("model file not found: '{}'", o.model));
  const auto bundle = load_model(o.model);
  const Dataset ds = c.data.empty() ? bundled_testing_set() : load_input(c.data);
  const auto& scaler = std::visit([](const auto& b) -> const ScalerParams& { return b.scaler; }, bundle);
  if (ds.dim() != scaler.min.size()) {
    throw DataError(fmt::format("model expects {} features but '{}' has {}", scaler.min.size(), c.data, ds.dim()));
  }
  const std::string method = std::holds_alternative<SvmBundle>(bundle) ? "SVM" : "BPN";
  const auto report = evaluate(predict_all(bundle, ds), ds.labels());
  const auto dir = prepare_out(c.out);
  write_report(dir, "evaluation", method, report, c.format);
  fmt::print("{}", report_text(method, report));
  return 0;
}

int cmd_reproduce(const CommonOptions& c, const MlpOptions& o) {
  ExperimentConfig cfg;
  cfg.mlp_seeds = o.seeds;
  cfg.mlp.learning_rate = o.eta;
  cfg.mlp.momentum = o.momentum;
  cfg.mlp.n_hidden = o.hidden;
  cfg.mlp.max_epochs = o.max_epochs;
  cfg.mlp.rms_target = o.rms_target;
  if (cfg.mlp_seeds.empty()) throw DataError("at least one seed is required");

  const auto r = run_experiment(cfg);
  const auto dir = prepare_out(c.out);

  save_csv(dir / "training.csv", r.train);
  save_csv(dir / "testing.csv", r.test);
  save_model(dir / "svm_model.json", r.svm);
  save_model(dir / "mlp_model.json", r.mlp_runs[r.mlp_best].bundle);
  write_file(dir / "svm_test_report.json", to_json(r.svm_test_report, "SVM") + "\n");
  write_file(dir / "mlp_test_report.json", to_json(r.mlp_test_reports[r.mlp_best], "BPN") + "\n");
  {
    std::ostringstream os;
    write_trace_csv(os, r.mlp_runs[r.mlp_best].trace);
    write_file(dir / "mlp_trace.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "seed,train_correct,train_rms,epochs,test_correct,type1,type2\n";
    for (std::size_t i = 0; i < r.mlp_runs.size(); ++i) {
      const auto& run = r.mlp_runs[i];
      const auto& rep = r.mlp_test_reports[i];
      os << fmt::format("{},{},{},{},{},{},{}\n", run.seed, run.train_correct, run.train_rms,
                        run.trace.epochs_run, rep.correct(), rep.type1, rep.type2);
    }
    write_file(dir / "mlp_seeds.csv", os.str());
  }
  if (r.grid) {
    std::ostringstream os;
    write_grid_csv(os, *r.grid);
    write_file(dir / "grid.csv", os.str());
  }
  const auto table = render_text(r.table);
  write_file(dir / "comparison.txt", table);

  fmt::print("SVM rbf:gamma={} C={}: training {}/{}, {} support vectors, KKT residual {:.2e}, "
             "{}-fold CV accuracy {}\n",
             cfg.svm_gamma, cfg.svm_C, r.svm_train_report.correct(), r.svm_train_report.n,
             r.svm.model.support_vectors.size(), r.svm_kkt, cfg.cv_folds, format_percent(r.svm_cv.mean));
  if (r.grid) {
    fmt::print("grid search best: C={} gamma={} (CV accuracy {})\n", r.grid->best_C, r.grid->best_gamma,
               format_percent(r.grid->best_accuracy));
  }
  const auto& best = r.mlp_runs[r.mlp_best];
  fmt::print("BPN best seed {}: training {}/{}, RMS {:.4f}, {} epochs\n\n", best.seed, best.train_correct,
             r.train.size(), best.train_rms, best.trace.epochs_run);
  fmt::print("{}\n", table);

  int status = 0;
  for (const auto& check : check_thresholds(r)) {
    fmt::print("[{}] {}: {}\n", check.passed ? "PASS" : "FAIL", check.name, check.detail);
    if (!check.passed) status = 1;
  }
  if (status != 0) fmt::print(stderr, "reproduction thresholds not met\n");
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Financial distress classification with a kernel SVM and a back-propagation network"};
  app.require_subcommand(1);

  CommonOptions common;
  SvmOptions svm;
  MlpOptions mlp;
  GridOptions grid;
  EvalOptions eval;

  auto add_common = [&](CLI::App* sub, bool with_data) {
    if (with_data) sub->add_option("--data", common.data, "CSV file (header f1..fn,label); bundled table if omitted");
    sub->add_option("--out", common.out, "output directory")->capture_default_str();
    sub->add_option("--format", common.format, "report format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
  };
  auto add_mlp = [&](CLI::App* sub) {
    sub->add_option("--seeds", mlp.seeds, "comma-separated seed list")->delimiter(',')->capture_default_str();
    sub->add_option("--eta", mlp.eta, "learning rate")->capture_default_str();
    sub->add_option("--momentum", mlp.momentum, "momentum coefficient")->capture_default_str();
    sub->add_option("--hidden", mlp.hidden, "hidden units")->capture_default_str();
    sub->add_option("--max-epochs", mlp.max_epochs, "epoch budget")->capture_default_str();
    sub->add_option("--rms-target", mlp.rms_target, "stop once the epoch RMS falls below this")
        ->capture_default_str();
  };

  auto* train_svm_cmd = app.add_subcommand("train-svm", "train the kernel SVM and write the model");
  add_common(train_svm_cmd, true);
  train_svm_cmd->add_option("--kernel", svm.kernel, "linear | poly:d=<int> | sigmoid | rbf:gamma=<float>");
  train_svm_cmd->add_option("--c", svm.C, "box constraint C")->capture_default_str();
  train_svm_cmd->add_option("--gamma", svm.gamma, "rbf gamma (default 0.25)");
  train_svm_cmd->add_option("--seed", svm.seed, "tie-break seed")->capture_default_str();

  auto* train_mlp_cmd = app.add_subcommand("train-mlp", "train the back-propagation network over a seed sweep");
  add_common(train_mlp_cmd, true);
  add_mlp(train_mlp_cmd);

  auto* grid_cmd = app.add_subcommand("gridsearch", "k-fold grid search over (C, gamma) for the rbf SVM");
  add_common(grid_cmd, true);
  grid_cmd->add_option("--k", grid.k, "folds")->capture_default_str();
  grid_cmd->add_option("--seed", grid.seed, "fold shuffle seed")->capture_default_str();
  grid_cmd->add_option("--c", grid.c_grid, "C values (comma-separated)")->delimiter(',');
  grid_cmd->add_option("--gamma", grid.gamma_grid, "gamma values (comma-separated)")->delimiter(',');

  auto* eval_cmd = app.add_subcommand("evaluate", "score a saved model on a labelled CSV");
  add_common(eval_cmd, true);
  eval_cmd->add_option("--model", eval.model, "model file written by train-svm/train-mlp")->required();

  auto* repro_cmd = app.add_subcommand("reproduce", "run the full SVM vs BPN comparison on the bundled data");
  add_common(repro_cmd, false);
  add_mlp(repro_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_svm_cmd->parsed()) return cmd_train_svm(common, svm);
    if (train_mlp_cmd->parsed()) return cmd_train_mlp(common, mlp);
    if (grid_cmd->parsed()) return cmd_gridsearch(common, grid);
    if (eval_cmd->parsed()) return cmd_evaluate(common, eval);
    if (repro_cmd->parsed()) return cmd_reproduce(common, mlp);
  } catch (const IoError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 1;
}
