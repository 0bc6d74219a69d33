#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "distress/dataset.hpp"
#include "distress/kernel.hpp"
#include "distress/svm.hpp"

namespace distress {

struct FoldAssignment {
  std::size_t k = 0;
  std::vector<std::size_t> fold_of;  // fold index per sample
  bool stratified = false;

  std::vector<std::size_t> train_indices(std::size_t fold) const;
  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::vector<std::size_t> fold_sizes() const;
};

// Seeded shuffle followed by round-robin assignment. Stratified by label
// when every class has at least k members, plain otherwise.
FoldAssignment kfold_split(const Dataset& ds, std::size_t k, std::uint64_t seed);

struct CvOptions {
  ScaleRange scale_range{};
  TrainConfig train{};  // its C is overridden per call
};

struct CvResult {
  std::vector<double> fold_accuracy;
  double mean = 0.0;
  // Some training portion held a single class; that fold used a constant predictor.
  bool degenerate = false;
};

// Each fold: fit the scaler on the training portion, train, score the held-out portion.
CvResult cv_accuracy(const Dataset& ds, const KernelSpec& kernel, double C, const FoldAssignment& folds,
                     const CvOptions& opts = {});

struct GridPoint {
  double C = 0.0;
  double gamma = 0.0;
  CvResult cv;
};

struct GridSearchResult {
  std::vector<GridPoint> grid;  // C-major in the order the grids were given
  double best_C = 0.0;
  double best_gamma = 0.0;
  double best_accuracy = 0.0;
};

// Exhaustive rbf search. Best mean accuracy wins; ties go to the smaller C,
// then the smaller gamma.
GridSearchResult grid_search(const Dataset& ds, const std::vector<double>& C_grid,
                             const std::vector<double>& gamma_grid, std::size_t k, std::uint64_t seed,
                             const CvOptions& opts = {});

// 2^-5, 2^-3, ..., 2^15 plus 1.
std::vector<double> default_c_grid();
// 2^-15, 2^-13, ..., 2^3 plus 0.25.
std::vector<double> default_gamma_grid();

}  // namespace distress
