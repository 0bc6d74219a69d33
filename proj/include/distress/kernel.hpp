#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace distress {

enum class KernelKind { linear, polynomial, sigmoid, rbf };

// Kernel family plus its parameters. `degree` is meaningful only for
// polynomial, `gamma` only for rbf; both stay at zero otherwise.
//
//   linear      x'z
//   polynomial  (x'z + 1)^d
//   sigmoid     tanh(x'z + 1)      (not positive semidefinite in general)
//   rbf         exp(-gamma |x - z|^2)
struct KernelSpec {
  KernelKind kind = KernelKind::rbf;
  int degree = 0;
  double gamma = 0.0;

  static KernelSpec linear() { return {KernelKind::linear, 0, 0.0}; }
  // Degree 3 is a convention only; nothing in the experiment uses it.
  static KernelSpec polynomial(int d = 3);
  static KernelSpec sigmoid() { return {KernelKind::sigmoid, 0, 0.0}; }
  static KernelSpec rbf(double gamma);

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

// Parses `linear | poly:d=<int> | sigmoid | rbf:gamma=<float>`.
KernelSpec parse_kernel_spec(std::string_view text);
std::string to_string(const KernelSpec& spec);

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> z);

// Dense row-major square matrix.
class SquareMatrix {
 public:
  explicit SquareMatrix(std::size_t n = 0) : n_(n), data_(n * n, 0.0) {}
  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

SquareMatrix gram_matrix(const KernelSpec& spec, const std::vector<std::vector<double>>& points);

}  // namespace distress
