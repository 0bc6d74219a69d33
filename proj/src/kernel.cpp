#include "distress/kernel.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "distress/error.hpp"

namespace distress {

KernelSpec KernelSpec::polynomial(int d) {
  if (d <= 0) throw DataError(fmt::format("polynomial degree must be positive, got {}", d));
  return {KernelKind::polynomial, d, 0.0};
}

KernelSpec KernelSpec::rbf(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DataError(fmt::format("rbf gamma must be positive, got {}", gamma));
  }
  return {KernelKind::rbf, 0, gamma};
}

namespace {

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T v{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw DataError(fmt::format("bad {} in kernel spec: '{}'", what, text));
  }
  return v;
}

}  // namespace

KernelSpec parse_kernel_spec(std::string_view text) {
  if (text == "linear") return KernelSpec::linear();
  if (text == "sigmoid") return KernelSpec::sigmoid();
  if (text == "poly") return KernelSpec::polynomial();
  if (text.starts_with("poly:d=")) return KernelSpec::polynomial(parse_number<int>(text.substr(7), "degree"));
  if (text.starts_with("rbf:gamma=")) return KernelSpec::rbf(parse_number<double>(text.substr(10), "gamma"));
  throw DataError(fmt::format(
      "unknown kernel spec '{}' (expected linear | poly:d=<int> | sigmoid | rbf:gamma=<float>)", text));
}

std::string to_string(const KernelSpec& spec) {
  switch (spec.kind) {
    case KernelKind::linear:
      return "linear";
    case KernelKind::polynomial:
      return fmt::format("poly:d={}", spec.degree);
    case KernelKind::sigmoid:
      return "sigmoid";
    case KernelKind::rbf:
      return fmt::format("rbf:gamma={}", spec.gamma);
  }
  return {};
}

namespace {

double dot(std::span<const double> x, std::span<const double> z) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * z[i];
  return acc;
}

double squared_distance(std::span<const double> x, std::span<const double> z) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - z[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> z) {
  if (x.size() != z.size()) {
    throw DataError(fmt::format("kernel arguments differ in dimension: {} vs {}", x.size(), z.size()));
  }
  switch (spec.kind) {
    case KernelKind::linear:
      return dot(x, z);
    case KernelKind::polynomial:
      return std::pow(dot(x, z) + 1.0, spec.degree);
    case KernelKind::sigmoid:
      return std::tanh(dot(x, z) + 1.0);
    case KernelKind::rbf:
      return std::exp(-spec.gamma * squared_distance(x, z));
  }
  return 0.0;
}

SquareMatrix gram_matrix(const KernelSpec& spec, const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw DataError("gram matrix of an empty point set");
  const std::size_t n = points.size();
  SquareMatrix g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      g(i, j) = kernel_eval(spec, points[i], points[j]);
      g(j, i) = g(i, j);
    }
  }
  return g;
}

}  // namespace distress
