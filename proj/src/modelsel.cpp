#include "distress/modelsel.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "distress/error.hpp"
#include "distress/random.hpp"

namespace distress {

std::vector<std::size_t> FoldAssignment::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] != fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldAssignment::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] == fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldAssignment::fold_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t f : fold_of) ++sizes[f];
  return sizes;
}

FoldAssignment kfold_split(const Dataset& ds, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw DataError(fmt::format("k must be at least 2, got {}", k));
  if (k > ds.size()) throw DataError(fmt::format("k exceeds dataset size ({} > {})", k, ds.size()));

  Rng rng(seed);
  FoldAssignment fa;
  fa.k = k;
  fa.fold_of.assign(ds.size(), 0);
  fa.stratified = ds.count(Label::positive) >= k && ds.count(Label::negative) >= k;

  // Concatenating the shuffled classes and dealing round-robin keeps both
  // the overall fold sizes and the per-class counts within one of each other.
  std::vector<std::size_t> order;
  if (fa.stratified) {
    for (Label l : {Label::positive, Label::negative}) {
      std::vector<std::size_t> cls;
      for (std::size_t i = 0; i < ds.size(); ++i)
        if (ds[i].label == l) cls.push_back(i);
      rng.shuffle(cls);
      order.insert(order.end(), cls.begin(), cls.end());
    }
  } else {
    order.resize(ds.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
  }
  for (std::size_t pos = 0; pos < order.size(); ++pos) fa.fold_of[order[pos]] = pos % k;
  return fa;
}

CvResult cv_accuracy(const Dataset& ds, const KernelSpec& kernel, double C, const FoldAssignment& folds,
                     const CvOptions& opts) {
  if (folds.fold_of.size() != ds.size()) {
    throw DataError(fmt::format("fold assignment covers {} samples, dataset has {}", folds.fold_of.size(),
                                ds.size()));
  }
  TrainConfig cfg = opts.train;
  cfg.C = C;

  CvResult r;
  for (std::size_t f = 0; f < folds.k; ++f) {
    const auto train_idx = folds.train_indices(f);
    const auto test_idx = folds.test_indices(f);
    if (train_idx.empty() || test_idx.empty()) throw DataError(fmt::format("fold {} is empty", f));

    const Dataset train = ds.subset(train_idx);
    const Dataset test = ds.subset(test_idx);
    std::size_t correct = 0;

    if (train.count(Label::positive) == 0 || train.count(Label::negative) == 0) {
      r.degenerate = true;
      const Label only = train[0].label;
      for (const auto& s : test.samples()) correct += s.label == only;
    } else {
      const auto scaler = fit_scaler(train, opts.scale_range);
      const auto model = train_svm(apply_scaler(scaler, train), kernel, cfg);
      for (const auto& s : test.samples()) {
        correct += predict(model, apply_scaler(scaler, s).features) == s.label;
      }
    }
    r.fold_accuracy.push_back(static_cast<double>(correct) / static_cast<double>(test.size()));
  }
  double sum = 0.0;
  for (double a : r.fold_accuracy) sum += a;
  r.mean = sum / static_cast<double>(r.fold_accuracy.size());
  return r;
}

GridSearchResult grid_search(const Dataset& ds, const std::vector<double>& C_grid,
                             const std::vector<double>& gamma_grid, std::size_t k, std::uint64_t seed,
                             const CvOptions& opts) {
  if (C_grid.empty() || gamma_grid.empty()) throw DataError("grid search needs non-empty C and gamma grids");
  const auto folds = kfold_split(ds, k, seed);

  GridSearchResult res;
  const GridPoint* best = nullptr;
  for (double C : C_grid) {
    for (double gamma : gamma_grid) {
      res.grid.push_back({C, gamma, cv_accuracy(ds, KernelSpec::rbf(gamma), C, folds, opts)});
    }
  }
  for (const auto& p : res.grid) {
    if (!best || p.cv.mean > best->cv.mean ||
        (p.cv.mean == best->cv.mean && (p.C < best->C || (p.C == best->C && p.gamma < best->gamma)))) {
      best = &p;
    }
  }
  res.best_C = best->C;
  res.best_gamma = best->gamma;
  res.best_accuracy = best->cv.mean;
  return res;
}

namespace {

std::vector<double> powers_of_two(int from, int to, int step, double extra) {
  std::vector<double> out;
  for (int e = from; e <= to; e += step) out.push_back(std::ldexp(1.0, e));
  if (std::find(out.begin(), out.end(), extra) == out.end()) {
    out.push_back(extra);
    std::sort(out.begin(), out.end());
  }
  return out;
}

}  // namespace

std::vector<double> default_c_grid() { return powers_of_two(-5, 15, 2, 1.0); }

std::vector<double> default_gamma_grid() { return powers_of_two(-15, 3, 2, 0.25); }

}  // namespace distress
