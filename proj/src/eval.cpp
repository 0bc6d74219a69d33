#include "distress/eval.hpp"

#include <algorithm>
#include <array>

#include <fmt/format.h>

#include "distress/error.hpp"

namespace distress {

EvaluationReport evaluate(std::span<const Label> predictions, std::span<const Label> labels) {
  if (predictions.size() != labels.size()) {
    throw DataError(fmt::format("{} predictions for {} labels", predictions.size(), labels.size()));
  }
  if (labels.empty()) throw DataError("cannot evaluate an empty prediction set");

  EvaluationReport r;
  r.n = labels.size();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == Label::positive && predictions[i] == Label::negative) ++r.type1;
    if (labels[i] == Label::negative && predictions[i] == Label::positive) ++r.type2;
    r.records.push_back({i, labels[i], predictions[i]});
  }
  r.accuracy = 1.0 - static_cast<double>(r.errors()) / static_cast<double>(r.n);
  return r;
}

ComparisonTable compare(std::span<const NamedReport> reports) {
  ComparisonTable t;
  for (const auto& nr : reports) {
    const auto& r = nr.report;
    t.push_back({nr.method, r.n, r.type1, r.type2, r.errors(), r.accuracy});
  }
  return t;
}

std::string format_percent(double fraction) { return fmt::format("{:.1f}%", 100.0 * fraction); }

std::string format_count(std::size_t count, std::size_t n) {
  return fmt::format("{}/{} ({})", count, n,
                     format_percent(static_cast<double>(count) / static_cast<double>(n)));
}

std::string render_text(const ComparisonTable& table) {
  constexpr std::size_t kCols = 6;
  const std::array<std::string, kCols> header = {"Method", "Number of sample", "Type I error",
                                                 "Type II error", "Error", "Accuracy"};
  std::vector<std::array<std::string, kCols>> cells;
  cells.push_back(header);
  for (const auto& row : table) {
    cells.push_back({row.method, std::to_string(row.n), format_count(row.type1, row.n),
                     format_count(row.type2, row.n), format_count(row.errors, row.n),
                     format_percent(row.accuracy)});
  }

  std::array<std::size_t, kCols> width{};
  for (const auto& r : cells)
    for (std::size_t c = 0; c < kCols; ++c) width[c] = std::max(width[c], r[c].size());

  std::string out;
  auto emit = [&](const std::array<std::string, kCols>& r) {
    for (std::size_t c = 0; c < kCols; ++c) {
      if (c + 1 < kCols) {
        out += fmt::format("{:<{}}  ", r[c], width[c]);
      } else {
        out += r[c] + "\n";
      }
    }
  };
  emit(cells.front());
  std::array<std::string, kCols> rule;
  for (std::size_t c = 0; c < kCols; ++c) rule[c] = std::string(width[c], '-');
  emit(rule);
  for (std::size_t i = 1; i < cells.size(); ++i) emit(cells[i]);
  return out;
}

}  // namespace distress
