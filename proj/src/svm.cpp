#include "distress/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include <fmt/format.h>

#include "distress/error.hpp"
#include "distress/random.hpp"

namespace distress {

namespace {

// Curvature floor for pairs whose kernel is not positive definite along
// the update direction (sigmoid kernel, duplicated points).
constexpr double kMinCurvature = 1e-12;

constexpr double kBoundSnap = 1e-12;

bool at_lower(double a) { return a <= kSupportVectorThreshold; }
bool at_upper(double a, double C) { return a >= C - kSupportVectorThreshold; }

// g_i = sum_j a_j y_j K_ij, i.e. f(x_i) without the bias.
std::vector<double> kernel_sums(std::span<const double> alphas, std::span<const double> labels,
                                const SquareMatrix& gram) {
  const std::size_t n = alphas.size();
  std::vector<double> g(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (alphas[j] == 0.0) continue;
    const double c = alphas[j] * labels[j];
    for (std::size_t i = 0; i < n; ++i) g[i] += c * gram(i, j);
  }
  return g;
}

void check_shapes(std::span<const double> alphas, std::span<const double> labels,
                  const SquareMatrix& gram) {
  if (alphas.size() != labels.size() || alphas.size() != gram.size()) {
    throw DataError(fmt::format("inconsistent sizes: {} alphas, {} labels, {}x{} gram", alphas.size(),
                                labels.size(), gram.size(), gram.size()));
  }
}

class SmoSolver {
 public:
  SmoSolver(std::span<const double> labels, const SquareMatrix& gram, const TrainConfig& cfg)
      : y_(labels),
        gram_(gram),
        C_(cfg.C),
        tol_(cfg.kkt_tolerance),
        alpha_(labels.size(), 0.0),
        grad_(labels.size(), 0.0),
        order_(labels.size()) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    Rng rng(cfg.seed);
    rng.shuffle(order_);
    const std::size_t n = labels.size();
    max_iterations_ = (cfg.max_passes == 0 ? 10 * n : cfg.max_passes) * n;
  }

  void run(SolverTrace* trace) {
    while (true) {
      auto [low, up] = select_pair();
      const double gap = low && up ? violation(*low, *up) : 0.0;
      if (gap < tol_) break;
      if (iterations_ >= max_iterations_) {
        throw TrainingError(fmt::format("SMO did not converge after {} pair updates (KKT gap {:.3e})",
                                        iterations_, gap));
      }
      update_pair(*low, *up);
      ++iterations_;
      if (trace) trace->objective.push_back(dual_objective(alpha_, y_, gram_));
    }
  }

  const std::vector<double>& alphas() const { return alpha_; }
  std::size_t iterations() const { return iterations_; }

 private:
  // F_i = g_i - y_i. The bias cancels in E_i - E_j so it is left out.
  double error(std::size_t i) const { return grad_[i] - y_[i]; }

  // Points whose y_i a_i may still increase / decrease.
  bool in_up(std::size_t i) const { return y_[i] > 0 ? alpha_[i] < C_ : alpha_[i] > 0.0; }
  bool in_low(std::size_t i) const { return y_[i] > 0 ? alpha_[i] > 0.0 : alpha_[i] < C_; }

  double violation(std::size_t low, std::size_t up) const { return error(low) - error(up); }

  // Values within rounding of a bound are put exactly on it; otherwise a
  // pair can keep a sub-ulp amount of room and stall the iteration.
  double snap(double a) const {
    const double eps = kBoundSnap * C_;
    if (a <= eps) return 0.0;
    if (a >= C_ - eps) return C_;
    return a;
  }

  // The worst KKT violator paired with the partner maximizing |E1 - E2|.
  // Ties go to the earliest index in the seeded sweep order.
  std::pair<std::optional<std::size_t>, std::optional<std::size_t>> select_pair() const {
    std::optional<std::size_t> low, up;
    for (std::size_t i : order_) {
      if (in_low(i) && (!low || error(i) > error(*low))) low = i;
      if (in_up(i) && (!up || error(i) < error(*up))) up = i;
    }
    return {low, up};
  }

  void update_pair(std::size_t i, std::size_t j) {
    const double ai = alpha_[i];
    const double aj = alpha_[j];
    const double s = y_[i] * y_[j];

    double lo = 0.0;
    double hi = 0.0;
    if (s < 0) {
      lo = std::max(0.0, aj - ai);
      hi = std::min(C_, C_ + aj - ai);
    } else {
      lo = std::max(0.0, ai + aj - C_);
      hi = std::min(C_, ai + aj);
    }

    const double eta = std::max(gram_(i, i) + gram_(j, j) - 2.0 * gram_(i, j), kMinCurvature);
    const double aj_new = snap(std::clamp(aj + y_[j] * (error(i) - error(j)) / eta, lo, hi));
    const double ai_new = snap(ai + s * (aj - aj_new));

    const double di = (ai_new - ai) * y_[i];
    const double dj = (aj_new - aj) * y_[j];
    for (std::size_t k = 0; k < grad_.size(); ++k) grad_[k] += di * gram_(k, i) + dj * gram_(k, j);
    alpha_[i] = ai_new;
    alpha_[j] = aj_new;
  }

  std::span<const double> y_;
  const SquareMatrix& gram_;
  double C_;
  double tol_;
  std::vector<double> alpha_;
  std::vector<double> grad_;
  std::vector<std::size_t> order_;
  std::size_t iterations_ = 0;
  std::size_t max_iterations_ = 0;
};

}  // namespace

std::vector<double> label_values(const Dataset& ds) {
  std::vector<double> y;
  y.reserve(ds.size());
  for (const auto& s : ds.samples()) y.push_back(to_double(s.label));
  return y;
}

double dual_objective(std::span<const double> alphas, std::span<const double> labels,
                      const SquareMatrix& gram) {
  check_shapes(alphas, labels, gram);
  const std::size_t n = alphas.size();
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    linear += alphas[i];
    for (std::size_t j = 0; j < n; ++j) quad += alphas[i] * alphas[j] * labels[i] * labels[j] * gram(i, j);
  }
  return linear - 0.5 * quad;
}

double compute_bias(std::span<const double> alphas, std::span<const double> labels,
                    const SquareMatrix& gram, double C) {
  check_shapes(alphas, labels, gram);
  const auto g = kernel_sums(alphas, labels, gram);

  double free_sum = 0.0;
  std::size_t free_count = 0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    // Bias that puts point i exactly on its margin.
    const double r = labels[i] - g[i];
    if (at_lower(alphas[i])) {
      if (labels[i] > 0) lower = std::max(lower, r);
      else upper = std::min(upper, r);
    } else if (at_upper(alphas[i], C)) {
      if (labels[i] > 0) upper = std::min(upper, r);
      else lower = std::max(lower, r);
    } else {
      free_sum += r;
      ++free_count;
    }
  }
  if (free_count > 0) return free_sum / static_cast<double>(free_count);
  if (std::isfinite(lower) && std::isfinite(upper)) return 0.5 * (lower + upper);
  if (std::isfinite(lower)) return lower;
  if (std::isfinite(upper)) return upper;
  return 0.0;
}

double kkt_residual(std::span<const double> alphas, std::span<const double> labels,
                    const SquareMatrix& gram, double bias, double C) {
  check_shapes(alphas, labels, gram);
  const auto g = kernel_sums(alphas, labels, gram);
  double worst = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double margin = labels[i] * (g[i] + bias);
    double r = 0.0;
    if (at_lower(alphas[i])) r = std::max(0.0, 1.0 - margin);
    else if (at_upper(alphas[i], C)) r = std::max(0.0, margin - 1.0);
    else r = std::abs(margin - 1.0);
    worst = std::max(worst, r);
  }
  return worst;
}

SvmModel train_svm(const Dataset& ds, const KernelSpec& kernel, const TrainConfig& cfg,
                   SolverTrace* trace) {
  if (!(cfg.C > 0.0) || !(cfg.kkt_tolerance > 0.0)) {
    throw DataError("C and kkt_tolerance must be positive");
  }
  if (ds.count(Label::positive) == 0 || ds.count(Label::negative) == 0) {
    throw TrainingError("single-class dataset");
  }
  const auto points = ds.feature_rows();
  const auto y = label_values(ds);
  const auto gram = gram_matrix(kernel, points);

  SmoSolver solver(y, gram, cfg);
  solver.run(trace);
  const auto& alpha = solver.alphas();

  SvmModel m;
  m.kernel = kernel;
  m.C = cfg.C;
  m.bias = compute_bias(alpha, y, gram, cfg.C);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] > kSupportVectorThreshold) {
      m.support_vectors.push_back(points[i]);
      m.sv_labels.push_back(ds[i].label);
      m.alphas.push_back(alpha[i]);
    }
  }
  if (trace) {
    trace->alphas = alpha;
    trace->iterations = solver.iterations();
    trace->kkt_residual = kkt_residual(alpha, y, gram, m.bias, cfg.C);
  }
  return m;
}

double decision_value(const SvmModel& m, std::span<const double> x) {
  if (!m.support_vectors.empty() && x.size() != m.dim()) {
    throw DataError(fmt::format("model expects {} features, got {}", m.dim(), x.size()));
  }
  double f = m.bias;
  for (std::size_t i = 0; i < m.support_vectors.size(); ++i) {
    f += m.alphas[i] * to_double(m.sv_labels[i]) * kernel_eval(m.kernel, m.support_vectors[i], x);
  }
  return f;
}

Label predict(const SvmModel& m, std::span<const double> x) {
  return decision_value(m, x) >= 0.0 ? Label::positive : Label::negative;
}

double kkt_report(const SvmModel& m, const Dataset& ds) {
  std::vector<double> alphas(ds.size(), 0.0);
  std::vector<bool> used(m.support_vectors.size(), false);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t s = 0; s < m.support_vectors.size(); ++s) {
      if (!used[s] && m.sv_labels[s] == ds[i].label && m.support_vectors[s] == ds[i].features) {
        alphas[i] = m.alphas[s];
        used[s] = true;
        break;
      }
    }
  }

  double worst = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double margin = to_double(ds[i].label) * decision_value(m, ds[i].features);
    double r = 0.0;
    if (at_lower(alphas[i])) r = std::max(0.0, 1.0 - margin);
    else if (at_upper(alphas[i], m.C)) r = std::max(0.0, margin - 1.0);
    else r = std::abs(margin - 1.0);
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace distress
