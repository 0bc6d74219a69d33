#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "distress/dataset.hpp"
#include "distress/eval.hpp"
#include "distress/mlp.hpp"
#include "distress/modelsel.hpp"
#include "distress/svm.hpp"

namespace distress {

// A trained model together with the scaler fitted on its training data.
// Evaluation must reuse this scaler instead of refitting on test data.
struct SvmBundle {
  SvmModel model;
  ScalerParams scaler;
};

struct MlpBundle {
  MlpModel model;
  ScalerParams scaler;
};

using ModelBundle = std::variant<SvmBundle, MlpBundle>;

// JSON documents. Doubles are written in shortest round-trip form, so
// parse(serialize(m)) reproduces every value bit for bit.
std::string to_json(const SvmBundle& b);
std::string to_json(const MlpBundle& b);
ModelBundle model_from_json(std::string_view text);

void save_model(const std::filesystem::path& path, const ModelBundle& b);
ModelBundle load_model(const std::filesystem::path& path);

std::string to_json(const EvaluationReport& r, std::string_view method = {});

// `epoch,rms`
void write_trace_csv(std::ostream& out, const TrainingTrace& t);
// `C,gamma,fold0,...,fold{k-1},mean`
void write_grid_csv(std::ostream& out, const GridSearchResult& g);
// `index,truth,predicted`
void write_records_csv(std::ostream& out, const EvaluationReport& r);

}  // namespace distress
