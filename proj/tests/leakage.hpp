#pragma once

// Scaler leakage probe for cross-validation. One held-out sample carries a
// feature value far outside the range seen in its training portion. The
// fold accuracies reported by cv_accuracy are compared with two manual
// pipelines: scaler fitted on the training portion only (honest) and on the
// whole dataset (leaky). The probe is only meaningful when the two manual
// pipelines disagree.

#include <cstddef>
#include <vector>

#include "distress/dataset.hpp"
#include "distress/modelsel.hpp"
#include "distress/svm.hpp"

namespace distress::probe {

struct LeakageResult {
  std::vector<double> reported;
  std::vector<double> honest;
  std::vector<double> leaky;

  bool sensitive() const { return honest != leaky; }
  bool clean() const { return reported == honest; }
};

inline Dataset leakage_dataset() {
  std::vector<Sample> s;
  // The label follows the first feature; the second is noise. The last
  // sample is the probe, far below everything else on the first feature.
  const double neg[] = {0.0, 0.1, 0.2, 0.3, 0.35, 0.4};
  const double pos[] = {0.6, 0.65, 0.7, 0.8, 0.9, 1.0};
  const double noise[] = {0.3, 0.7, 0.1, 0.9, 0.5, 0.2};
  for (std::size_t i = 0; i < 6; ++i) s.push_back({{neg[i], noise[i]}, Label::negative});
  for (std::size_t i = 0; i < 6; ++i) s.push_back({{pos[i], noise[5 - i]}, Label::positive});
  s.push_back({{-40.0, 0.4}, Label::negative});
  return Dataset({"signal", "noise"}, s);
}

// Fold 0 holds every third sample plus the probe, fold 1 the rest.
inline FoldAssignment leakage_folds(const Dataset& ds) {
  FoldAssignment fa;
  fa.k = 2;
  fa.fold_of.assign(ds.size(), 1);
  for (std::size_t i = 0; i < ds.size(); i += 3) fa.fold_of[i] = 0;
  fa.fold_of.back() = 0;
  return fa;
}

inline double manual_fold(const Dataset& train, const Dataset& test, const ScalerParams& sc,
                          const KernelSpec& kernel, double C) {
  TrainConfig cfg;
  cfg.C = C;
  const auto model = train_svm(apply_scaler(sc, train), kernel, cfg);
  std::size_t correct = 0;
  for (const auto& s : test.samples()) correct += predict(model, apply_scaler(sc, s).features) == s.label;
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

inline LeakageResult leakage_probe() {
  const auto ds = leakage_dataset();
  const auto folds = leakage_folds(ds);
  const auto kernel = KernelSpec::linear();
  const double C = 1.0;

  LeakageResult r;
  CvOptions opts;
  opts.train.C = C;
  r.reported = cv_accuracy(ds, kernel, C, folds, opts).fold_accuracy;
  const auto global = fit_scaler(ds);
  for (std::size_t f = 0; f < folds.k; ++f) {
    const auto train = ds.subset(folds.train_indices(f));
    const auto test = ds.subset(folds.test_indices(f));
    r.honest.push_back(manual_fold(train, test, fit_scaler(train), kernel, C));
    r.leaky.push_back(manual_fold(train, test, global, kernel, C));
  }
  return r;
}

}  // namespace distress::probe
