#pragma once

// Randomized property checks shared by the unit and acceptance suites.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "distress/dataset.hpp"
#include "distress/kernel.hpp"
#include "distress/mlp.hpp"
#include "distress/random.hpp"
#include "distress/svm.hpp"
#include "oracles.hpp"

namespace distress::props {

struct SvmOracleSummary {
  int cases = 0;
  int objective_failures = 0;
  int prediction_failures = 0;
  int invariant_failures = 0;
  double worst_objective_gap = 0.0;  // grid optimum - solver objective
  double worst_equality = 0.0;       // |sum a_i y_i|
  double worst_kkt = 0.0;
  double worst_trace_drop = 0.0;
  std::vector<std::string> notes;

  bool ok() const { return objective_failures == 0 && prediction_failures == 0 && invariant_failures == 0; }
};

// Box constraint per dataset size, keeping the 0.01-step grid at no more
// than ~2e5 points.
inline double oracle_box(std::size_t n) {
  switch (n) {
    case 2: return 4.0;
    case 3: return 1.0;
    case 4: return 0.5;
    case 5: return 0.2;
    default: return 0.1;
  }
}

// Random 2-feature datasets with 2..6 points and both labels present,
// alternating linear and rbf kernels. The SMO solution is compared with the
// brute-force grid optimum of the dual.
inline SvmOracleSummary svm_vs_grid_oracle(int cases, std::uint64_t seed) {
  SvmOracleSummary s;
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    const std::size_t n = 2 + rng.below(5);
    std::vector<Sample> samples(n);
    for (auto& smp : samples) {
      smp.features = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
      smp.label = rng.below(2) ? Label::positive : Label::negative;
    }
    samples[0].label = Label::positive;
    samples[1].label = Label::negative;
    const Dataset ds({"a", "b"}, samples);
    const KernelSpec kernel = c % 2 ? KernelSpec::rbf(0.5 + rng.unit() * 2.0) : KernelSpec::linear();

    TrainConfig cfg;
    cfg.C = oracle_box(n);
    cfg.seed = static_cast<std::uint64_t>(c);
    SolverTrace trace;
    const auto model = train_svm(ds, kernel, cfg, &trace);
    ++s.cases;

    const auto y = label_values(ds);
    const auto gram = gram_matrix(kernel, ds.feature_rows());
    const double solver_obj = dual_objective(trace.alphas, y, gram);
    const auto grid = oracle::grid_dual_optimum(y, gram, cfg.C);

    const double gap = grid.objective - solver_obj;
    s.worst_objective_gap = std::max(s.worst_objective_gap, gap);
    if (gap > 1e-4) ++s.objective_failures;

    SvmModel grid_model;
    grid_model.kernel = kernel;
    grid_model.C = cfg.C;
    grid_model.bias = compute_bias(grid.alphas, y, gram, cfg.C);
    for (std::size_t i = 0; i < n; ++i) {
      if (grid.alphas[i] > kSupportVectorThreshold) {
        grid_model.support_vectors.push_back(ds[i].features);
        grid_model.sv_labels.push_back(ds[i].label);
        grid_model.alphas.push_back(grid.alphas[i]);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (predict(model, ds[i].features) != predict(grid_model, ds[i].features)) {
        ++s.prediction_failures;
        s.notes.push_back("case " + std::to_string(c) + ": prediction differs at point " + std::to_string(i) +
                          " (solver f=" + std::to_string(decision_value(model, ds[i].features)) +
                          ", grid f=" + std::to_string(decision_value(grid_model, ds[i].features)) + ")");
        break;
      }
    }

    double eq = 0.0;
    bool boxed = true;
    for (std::size_t i = 0; i < n; ++i) {
      eq += trace.alphas[i] * y[i];
      boxed = boxed && trace.alphas[i] >= 0.0 && trace.alphas[i] <= cfg.C;
    }
    double drop = 0.0;
    for (std::size_t t = 1; t < trace.objective.size(); ++t) {
      drop = std::max(drop, trace.objective[t - 1] - trace.objective[t]);
    }
    s.worst_equality = std::max(s.worst_equality, std::abs(eq));
    s.worst_kkt = std::max(s.worst_kkt, trace.kkt_residual);
    s.worst_trace_drop = std::max(s.worst_trace_drop, drop);
    if (std::abs(eq) >= 1e-6 || !boxed || trace.kkt_residual >= 1e-3 || drop > 0.0) ++s.invariant_failures;
  }
  return s;
}

struct MlpGradientSummary {
  int cases = 0;
  int failures = 0;
  double worst_relative_error = 0.0;
};

inline double relative_error(double a, double b) {
  const double scale = std::abs(a) + std::abs(b);
  return scale < 1e-8 ? std::abs(a - b) : std::abs(a - b) / scale;
}

// Random networks of the given shape: the delta-rule gradient
// (dE/dw_kj = -d_j H_k, dE/dtheta_j = d_j, and likewise one layer down)
// against central differences of E = 1/2 sum (T - Y)^2.
inline MlpGradientSummary mlp_gradient_check(int cases, std::uint64_t seed, std::size_t n_in = 4,
                                             std::size_t n_hidden = 4, std::size_t n_out = 1) {
  MlpGradientSummary s;
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    MlpConfig cfg;
    cfg.n_input = n_in;
    cfg.n_hidden = n_hidden;
    cfg.n_output = n_out;
    cfg.seed = rng.next();
    auto m = init_network(cfg);
    // Wider weights than the initializer so some units sit in the nonlinear region.
    for (double* p : oracle::parameters(m)) *p *= 1.0 + 3.0 * rng.unit();
    std::vector<double> x(n_in), t(n_out);
    for (auto& v : x) v = rng.uniform(-1, 1);
    for (auto& v : t) v = rng.below(2) ? 1.0 : -1.0;

    const auto act = forward(m, x);
    const auto d = backward_deltas(m, act, t);
    std::vector<double> analytic;
    for (std::size_t i = 0; i < n_in; ++i)
      for (std::size_t k = 0; k < n_hidden; ++k) analytic.push_back(-d.hidden[k] * x[i]);
    for (std::size_t k = 0; k < n_hidden; ++k) analytic.push_back(d.hidden[k]);
    for (std::size_t k = 0; k < n_hidden; ++k)
      for (std::size_t j = 0; j < n_out; ++j) analytic.push_back(-d.output[j] * act.hidden[k]);
    for (std::size_t j = 0; j < n_out; ++j) analytic.push_back(d.output[j]);

    const auto numeric = oracle::numeric_gradient(m, x, t, 1e-5);
    ++s.cases;
    bool bad = false;
    for (std::size_t p = 0; p < numeric.size(); ++p) {
      const double r = relative_error(analytic[p], numeric[p]);
      s.worst_relative_error = std::max(s.worst_relative_error, r);
      bad = bad || r >= 1e-4;
    }
    s.failures += bad;
  }
  return s;
}

struct GramPsdSummary {
  int cases = 0;
  int failures = 0;
  double lowest_eigenvalue = 0.0;
};

inline GramPsdSummary rbf_gram_psd(int cases, std::uint64_t seed) {
  GramPsdSummary s;
  s.lowest_eigenvalue = 1e300;
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    const std::size_t n = 2 + rng.below(39);
    const std::size_t dim = 1 + rng.below(5);
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (auto& p : pts)
      for (auto& v : p) v = rng.uniform(-1, 1);
    const auto g = gram_matrix(KernelSpec::rbf(std::ldexp(1.0, static_cast<int>(rng.below(9)) - 4)), pts);
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g(i, j);
    const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    ++s.cases;
    s.lowest_eigenvalue = std::min(s.lowest_eigenvalue, lo);
    if (lo < -1e-10) ++s.failures;
  }
  return s;
}

}  // namespace distress::props
