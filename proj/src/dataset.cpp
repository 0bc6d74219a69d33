#include "distress/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "distress/error.hpp"

namespace distress {

Label label_from_int(int v) {
  if (v == 1) return Label::positive;
  if (v == -1) return Label::negative;
  throw DataError(fmt::format("label must be 1 or -1, got {}", v));
}

Dataset::Dataset(std::vector<std::string> feature_names, std::vector<Sample> samples)
    : feature_names_(std::move(feature_names)), samples_(std::move(samples)) {
  if (samples_.empty()) throw DataError("empty dataset");
  if (feature_names_.empty()) throw DataError("dataset has no features");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i].features.size() != feature_names_.size()) {
      throw DataError(fmt::format("sample {} has {} features, expected {}", i,
                                  samples_[i].features.size(), feature_names_.size()));
    }
    label_from_int(to_int(samples_[i].label));
  }
}

std::size_t Dataset::count(Label l) const {
  return static_cast<std::size_t>(
      std::count_if(samples_.begin(), samples_.end(), [l](const Sample& s) { return s.label == l; }));
}

std::vector<Label> Dataset::labels() const {
  std::vector<Label> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.label);
  return out;
}

std::vector<std::vector<double>> Dataset::feature_rows() const {
  std::vector<std::vector<double>> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.features);
  return out;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<Sample> picked;
  picked.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= samples_.size()) throw DataError(fmt::format("subset index {} out of range", i));
    picked.push_back(samples_[i]);
  }
  return Dataset(feature_names_, std::move(picked));
}

const std::vector<std::string>& attribute_names() {
  static const std::vector<std::string> names = {"financial_structure", "earning", "operating",
                                                 "debt_paying"};
  return names;
}

namespace {

struct IndicatorGroup {
  std::size_t first;
  std::vector<double> weights;
};

// Indicator weights per measured attribute; every group sums to 25.
const std::array<IndicatorGroup, 4>& indicator_groups() {
  static const std::array<IndicatorGroup, 4> groups = {{
      {0, {7, 6, 12}},
      {3, {8, 8, 5, 4}},
      {7, {7, 6, 5, 4, 3}},
      {12, {8, 7, 10}},
  }};
  return groups;
}

}  // namespace

Sample aggregate_indicators(const RawIndicatorRecord& record) {
  Sample s;
  s.label = record.label;
  for (const auto& g : indicator_groups()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.weights.size(); ++i) acc += record.x[g.first + i] * g.weights[i];
    s.features.push_back(acc / 25.0);
  }
  return s;
}

ScalerParams fit_scaler(const Dataset& ds, ScaleRange range) {
  if (!(range.lower < range.upper)) throw DataError("scale range must satisfy lower < upper");
  ScalerParams p;
  p.range = range;
  p.min = ds[0].features;
  p.max = ds[0].features;
  for (const auto& s : ds.samples()) {
    for (std::size_t j = 0; j < s.features.size(); ++j) {
      p.min[j] = std::min(p.min[j], s.features[j]);
      p.max[j] = std::max(p.max[j], s.features[j]);
    }
  }
  return p;
}

Sample apply_scaler(const ScalerParams& p, const Sample& s) {
  if (s.features.size() != p.min.size()) {
    throw DataError(fmt::format("scaler expects {} features, sample has {}", p.min.size(),
                                s.features.size()));
  }
  Sample out;
  out.label = s.label;
  out.features.resize(s.features.size());
  const double width = p.range.upper - p.range.lower;
  for (std::size_t j = 0; j < s.features.size(); ++j) {
    const double span = p.max[j] - p.min[j];
    out.features[j] = span > 0.0 ? p.range.lower + width * (s.features[j] - p.min[j]) / span : 0.0;
  }
  return out;
}

Dataset apply_scaler(const ScalerParams& p, const Dataset& ds) {
  std::vector<Sample> scaled;
  scaled.reserve(ds.size());
  for (const auto& s : ds.samples()) scaled.push_back(apply_scaler(p, s));
  return Dataset(ds.feature_names(), std::move(scaled));
}

namespace {

std::string_view trim(std::string_view v) {
  while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
  while (!v.empty() && (v.back() == ' ' || v.back() == '\t' || v.back() == '\r')) v.remove_suffix(1);
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_real(std::string_view field, std::size_t row) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw DataError(fmt::format("row {}: malformed number '{}'", row, field));
  }
  return v;
}

}  // namespace

Dataset read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("missing header row");
  const auto header = split_fields(line);
  if (header.size() < 2 || header.back() != "label") {
    throw DataError("header must name features and end with a 'label' column");
  }
  std::vector<std::string> names(header.begin(), header.end() - 1);

  std::vector<Sample> samples;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw DataError(fmt::format("row {}: expected {} columns, found {}", row, header.size(),
                                  fields.size()));
    }
    Sample s;
    for (std::size_t j = 0; j + 1 < fields.size(); ++j) s.features.push_back(parse_real(fields[j], row));
    const auto lab = fields.back();
    if (lab == "1") {
      s.label = Label::positive;
    } else if (lab == "-1") {
      s.label = Label::negative;
    } else {
      throw DataError(fmt::format("row {}: label must be 1 or -1, got '{}'", row, lab));
    }
    samples.push_back(std::move(s));
  }
  if (samples.empty()) throw DataError("empty dataset");
  return Dataset(std::move(names), std::move(samples));
}

void write_csv(std::ostream& out, const Dataset& ds) {
  for (const auto& n : ds.feature_names()) out << n << ',';
  out << "label\n";
  for (const auto& s : ds.samples()) {
    for (double v : s.features) out << fmt::format("{},", v);
    out << to_int(s.label) << '\n';
  }
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  return read_csv(in);
}

void save_csv(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  write_csv(out, ds);
}

namespace {

Dataset make_table(std::initializer_list<std::array<double, 5>> rows) {
  std::vector<Sample> samples;
  for (const auto& r : rows) {
    samples.push_back({{r[0], r[1], r[2], r[3]}, label_from_int(static_cast<int>(r[4]))});
  }
  return Dataset(attribute_names(), std::move(samples));
}

}  // namespace

Dataset bundled_training_set() {
  return make_table({
      {0.23, 0.20, 0.09, 0.20, -1}, {0.18, 0.18, 0.10, 0.21, -1}, {0.16, 0.18, 0.08, 0.17, -1},
      {0.19, 0.11, 0.12, 0.18, -1}, {0.20, 0.22, 0.11, 0.19, -1}, {0.24, 0.20, 0.09, 0.20, -1},
      {0.23, 0.14, 0.06, 0.20, -1}, {0.20, 0.08, 0.07, 0.10, 1},  {0.18, 0.09, 0.05, 0.18, 1},
      {0.19, 0.12, 0.03, 0.12, 1},  {0.22, 0.13, 0.04, 0.15, -1}, {0.16, 0.10, 0.07, 0.14, 1},
      {0.19, 0.09, 0.11, 0.12, 1},  {0.15, 0.18, 0.16, 0.10, -1}, {0.18, 0.20, 0.20, 0.08, -1},
      {0.12, 0.17, 0.18, 0.13, -1}, {0.21, 0.18, 0.10, 0.12, -1}, {0.19, 0.18, 0.12, 0.09, -1},
      {0.22, 0.19, 0.09, 0.14, -1}, {0.20, 0.15, 0.15, 0.09, -1},
  });
}

Dataset bundled_testing_set() {
  return make_table({
      {0.22, 0.20, 0.10, 0.20, -1}, {0.20, 0.18, 0.10, 0.21, -1}, {0.16, 0.20, 0.08, 0.17, -1},
      {0.19, 0.15, 0.12, 0.18, -1}, {0.20, 0.22, 0.20, 0.19, -1}, {0.22, 0.20, 0.09, 0.20, -1},
      {0.23, 0.18, 0.06, 0.20, -1}, {0.20, 0.08, 0.09, 0.10, 1},  {0.18, 0.12, 0.05, 0.11, 1},
      {0.19, 0.15, 0.03, 0.12, 1},  {0.22, 0.13, 0.08, 0.15, -1}, {0.18, 0.10, 0.07, 0.14, 1},
      {0.19, 0.09, 0.12, 0.12, 1},  {0.16, 0.18, 0.16, 0.10, -1}, {0.18, 0.22, 0.20, 0.08, -1},
      {0.12, 0.17, 0.18, 0.15, -1}, {0.21, 0.18, 0.12, 0.12, 1},  {0.19, 0.20, 0.12, 0.10, -1},
      {0.22, 0.15, 0.09, 0.14, -1}, {0.21, 0.15, 0.18, 0.10, -1}, {0.20, 0.13, 0.09, 0.15, -1},
      {0.18, 0.15, 0.07, 0.18, 1},  {0.16, 0.10, 0.12, 0.14, 1},  {0.19, 0.18, 0.16, 0.18, -1},
      {0.16, 0.20, 0.20, 0.09, -1},
  });
}

}  // namespace distress
