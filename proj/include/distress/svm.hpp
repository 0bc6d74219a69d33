#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "distress/dataset.hpp"
#include "distress/kernel.hpp"

namespace distress {

// Coefficients at or below this value are treated as zero (not a support vector).
inline constexpr double kSupportVectorThreshold = 1e-8;

// Soft-margin kernel SVM. The decision function is
//   f(x) = sum_i alpha_i y_i K(x_i, x) + b
// over the stored support vectors, and predict() returns sign(f) with
// sign(0) = +1.
struct SvmModel {
  std::vector<std::vector<double>> support_vectors;
  std::vector<Label> sv_labels;
  std::vector<double> alphas;
  double bias = 0.0;
  KernelSpec kernel;
  double C = 1.0;

  std::size_t dim() const { return support_vectors.empty() ? 0 : support_vectors.front().size(); }
};

struct TrainConfig {
  double C = 1.0;
  double kkt_tolerance = 1e-3;
  // Upper bound on full passes; one pass is n pair updates. 0 selects 10 * n.
  std::size_t max_passes = 0;
  std::uint64_t seed = 0;
};

// Optional solver diagnostics.
struct SolverTrace {
  std::vector<double> objective;  // dual objective after each accepted pair update
  std::vector<double> alphas;     // final dual variables over all training points
  std::size_t iterations = 0;
  double kkt_residual = 0.0;
};

// Pairwise (SMO) coordinate ascent on the dual
//   max sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij
//   s.t. sum_i a_i y_i = 0,  0 <= a_i <= C.
// Throws TrainingError for single-class data or when max_passes is exhausted.
SvmModel train_svm(const Dataset& ds, const KernelSpec& kernel, const TrainConfig& cfg,
                   SolverTrace* trace = nullptr);

double dual_objective(std::span<const double> alphas, std::span<const double> labels,
                      const SquareMatrix& gram);

// Bias making y_i f(x_i) = 1 on the free support vectors (0 < a_i < C),
// averaged over all of them. With no free vector, the midpoint of the
// interval of biases consistent with the bounded/zero coefficients.
double compute_bias(std::span<const double> alphas, std::span<const double> labels,
                    const SquareMatrix& gram, double C);

double decision_value(const SvmModel& m, std::span<const double> x);
Label predict(const SvmModel& m, std::span<const double> x);

// Largest soft-margin KKT residual over the dataset given full dual
// variables and a bias:
//   a_i = 0      ->  max(0, 1 - y_i f_i)
//   0 < a_i < C  ->  |y_i f_i - 1|
//   a_i = C      ->  max(0, y_i f_i - 1)
double kkt_residual(std::span<const double> alphas, std::span<const double> labels,
                    const SquareMatrix& gram, double bias, double C);

// Same residual for a stored model. Samples of ds that match a support
// vector (features and label) take its alpha; everything else has alpha 0.
double kkt_report(const SvmModel& m, const Dataset& ds);

std::vector<double> label_values(const Dataset& ds);

}  // namespace distress
