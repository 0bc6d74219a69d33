#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace distress {

// Class label. Positive marks a distressed (special treatment) company.
enum class Label : int { negative = -1, positive = 1 };

inline constexpr int to_int(Label l) { return static_cast<int>(l); }
inline constexpr double to_double(Label l) { return static_cast<double>(static_cast<int>(l)); }

// Throws DataError unless v is exactly +1 or -1.
Label label_from_int(int v);

struct Sample {
  std::vector<double> features;
  Label label = Label::negative;
  friend bool operator==(const Sample&, const Sample&) = default;
};

// The fifteen raw financial ratios of one listed company.
struct RawIndicatorRecord {
  std::array<double, 15> x{};
  Label label = Label::negative;
};

// Ordered, non-empty collection of samples sharing one feature dimension.
class Dataset {
 public:
  Dataset(std::vector<std::string> feature_names, std::vector<Sample> samples);

  std::size_t size() const { return samples_.size(); }
  std::size_t dim() const { return feature_names_.size(); }
  const std::vector<Sample>& samples() const { return samples_; }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }

  std::size_t count(Label l) const;
  std::vector<Label> labels() const;
  std::vector<std::vector<double>> feature_rows() const;

  // Samples at the given indices, in index order.
  Dataset subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<std::string> feature_names_;
  std::vector<Sample> samples_;
};

// Names of the four measured attributes, in feature order.
const std::vector<std::string>& attribute_names();

// Weighted group averages of the fifteen indicators:
// [financial structure, earning, operating, debt paying]. Each group's
// weights sum to 25.
Sample aggregate_indicators(const RawIndicatorRecord& record);

// Target interval of min-max scaling.
struct ScaleRange {
  double lower = -1.0;
  double upper = 1.0;
  friend bool operator==(const ScaleRange&, const ScaleRange&) = default;
};

struct ScalerParams {
  std::vector<double> min;
  std::vector<double> max;
  ScaleRange range;
  friend bool operator==(const ScalerParams&, const ScalerParams&) = default;
};

ScalerParams fit_scaler(const Dataset& ds, ScaleRange range = {});

// Maps each feature linearly so that [min, max] lands on the scaler's
// range. Constant features (max == min) map to 0.
Sample apply_scaler(const ScalerParams& p, const Sample& s);
Dataset apply_scaler(const ScalerParams& p, const Dataset& ds);

// CSV with header `f1,...,fn,label`; labels strictly 1 or -1.
Dataset read_csv(std::istream& in);
void write_csv(std::ostream& out, const Dataset& ds);
Dataset load_csv(const std::filesystem::path& path);
void save_csv(const std::filesystem::path& path, const Dataset& ds);

// The bundled 20-company training table and 25-company testing table.
Dataset bundled_training_set();
Dataset bundled_testing_set();

}  // namespace distress
