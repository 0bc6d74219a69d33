#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "distress/dataset.hpp"

namespace distress {

// Type I: a distressed (+1) company predicted healthy (-1).
// Type II: a healthy (-1) company predicted distressed (+1).
struct EvaluationReport {
  struct Record {
    std::size_t index = 0;
    Label truth = Label::negative;
    Label predicted = Label::negative;
  };

  std::size_t n = 0;
  std::size_t type1 = 0;
  std::size_t type2 = 0;
  double accuracy = 0.0;
  std::vector<Record> records;

  std::size_t errors() const { return type1 + type2; }
  std::size_t correct() const { return n - errors(); }
  double type1_rate() const { return static_cast<double>(type1) / static_cast<double>(n); }
  double type2_rate() const { return static_cast<double>(type2) / static_cast<double>(n); }
  double error_rate() const { return static_cast<double>(errors()) / static_cast<double>(n); }
};

EvaluationReport evaluate(std::span<const Label> predictions, std::span<const Label> labels);

struct ComparisonRow {
  std::string method;
  std::size_t n = 0;
  std::size_t type1 = 0;
  std::size_t type2 = 0;
  std::size_t errors = 0;
  double accuracy = 0.0;
  friend bool operator==(const ComparisonRow&, const ComparisonRow&) = default;
};

struct NamedReport {
  std::string method;
  EvaluationReport report;
};

using ComparisonTable = std::vector<ComparisonRow>;

ComparisonTable compare(std::span<const NamedReport> reports);

// "k/n (x.y%)"
std::string format_count(std::size_t count, std::size_t n);
std::string format_percent(double fraction);

// Aligned plain-text table with the columns
// Method | Number of sample | Type I error | Type II error | Error | Accuracy.
std::string render_text(const ComparisonTable& table);

}  // namespace distress
