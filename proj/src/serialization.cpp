#include "distress/serialization.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "distress/error.hpp"
#include "json.hpp"

namespace distress {

using nlohmann::json;

namespace {

json scaler_json(const ScalerParams& p) {
  return {{"min", p.min}, {"max", p.max}, {"lower", p.range.lower}, {"upper", p.range.upper}};
}

ScalerParams scaler_from(const json& j) {
  ScalerParams p;
  p.min = j.at("min").get<std::vector<double>>();
  p.max = j.at("max").get<std::vector<double>>();
  p.range = {j.at("lower").get<double>(), j.at("upper").get<double>()};
  if (p.min.size() != p.max.size()) throw DataError("scaler min/max lengths differ");
  return p;
}

json matrix_json(const WeightMatrix& w) {
  json rows = json::array();
  for (std::size_t r = 0; r < w.rows; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < w.cols; ++c) row.push_back(w(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

WeightMatrix matrix_from(const json& j, std::size_t rows, std::size_t cols, std::string_view name) {
  WeightMatrix w(rows, cols);
  if (!j.is_array() || j.size() != rows) throw DataError(fmt::format("'{}' must have {} rows", name, rows));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw DataError(fmt::format("'{}' row {} must have {} entries", name, r, cols));
    }
    for (std::size_t c = 0; c < cols; ++c) w(r, c) = j[r][c].get<double>();
  }
  return w;
}

std::vector<double> vector_from(const json& j, std::size_t n, std::string_view name) {
  auto v = j.get<std::vector<double>>();
  if (v.size() != n) throw DataError(fmt::format("'{}' must have {} entries", name, n));
  return v;
}

SvmBundle svm_from(const json& j) {
  SvmBundle b;
  b.scaler = scaler_from(j.at("scaler"));
  b.model.kernel = parse_kernel_spec(j.at("kernel").get<std::string>());
  b.model.C = j.at("C").get<double>();
  b.model.bias = j.at("bias").get<double>();
  for (const auto& sv : j.at("support_vectors")) {
    b.model.alphas.push_back(sv.at("alpha").get<double>());
    b.model.sv_labels.push_back(label_from_int(sv.at("y").get<int>()));
    b.model.support_vectors.push_back(sv.at("x").get<std::vector<double>>());
    if (b.model.support_vectors.back().size() != b.scaler.min.size()) {
      throw DataError("support vector dimension does not match the scaler");
    }
  }
  return b;
}

MlpBundle mlp_from(const json& j) {
  MlpBundle b;
  b.scaler = scaler_from(j.at("scaler"));
  auto& cfg = b.model.config;
  cfg.n_input = j.at("n_input").get<std::size_t>();
  cfg.n_hidden = j.at("n_hidden").get<std::size_t>();
  cfg.n_output = j.at("n_output").get<std::size_t>();
  cfg.learning_rate = j.at("learning_rate").get<double>();
  cfg.momentum = j.at("momentum").get<double>();
  cfg.max_epochs = j.at("max_epochs").get<std::size_t>();
  cfg.rms_target = j.at("rms_target").get<double>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  validate(cfg);

  auto& m = b.model;
  m.w_ih = matrix_from(j.at("w_ih"), cfg.n_input, cfg.n_hidden, "w_ih");
  m.theta_hidden = vector_from(j.at("theta_hidden"), cfg.n_hidden, "theta_hidden");
  m.w_ho = matrix_from(j.at("w_ho"), cfg.n_hidden, cfg.n_output, "w_ho");
  m.theta_out = vector_from(j.at("theta_out"), cfg.n_output, "theta_out");
  m.prev_dw_ih = matrix_from(j.at("prev_dw_ih"), cfg.n_input, cfg.n_hidden, "prev_dw_ih");
  m.prev_dtheta_hidden = vector_from(j.at("prev_dtheta_hidden"), cfg.n_hidden, "prev_dtheta_hidden");
  m.prev_dw_ho = matrix_from(j.at("prev_dw_ho"), cfg.n_hidden, cfg.n_output, "prev_dw_ho");
  m.prev_dtheta_out = vector_from(j.at("prev_dtheta_out"), cfg.n_output, "prev_dtheta_out");
  if (b.scaler.min.size() != cfg.n_input) throw DataError("scaler dimension does not match n_input");
  return b;
}

}  // namespace

std::string to_json(const SvmBundle& b) {
  json svs = json::array();
  for (std::size_t i = 0; i < b.model.support_vectors.size(); ++i) {
    svs.push_back({{"alpha", b.model.alphas[i]},
                   {"y", to_int(b.model.sv_labels[i])},
                   {"x", b.model.support_vectors[i]}});
  }
  json j = {{"type", "svm"},
            {"kernel", to_string(b.model.kernel)},
            {"C", b.model.C},
            {"bias", b.model.bias},
            {"scaler", scaler_json(b.scaler)},
            {"support_vectors", std::move(svs)}};
  return j.dump(2);
}

std::string to_json(const MlpBundle& b) {
  const auto& m = b.model;
  const auto& cfg = m.config;
  json j = {{"type", "mlp"},
            {"n_input", cfg.n_input},
            {"n_hidden", cfg.n_hidden},
            {"n_output", cfg.n_output},
            {"learning_rate", cfg.learning_rate},
            {"momentum", cfg.momentum},
            {"max_epochs", cfg.max_epochs},
            {"rms_target", cfg.rms_target},
            {"seed", cfg.seed},
            {"scaler", scaler_json(b.scaler)},
            {"w_ih", matrix_json(m.w_ih)},
            {"theta_hidden", m.theta_hidden},
            {"w_ho", matrix_json(m.w_ho)},
            {"theta_out", m.theta_out},
            {"prev_dw_ih", matrix_json(m.prev_dw_ih)},
            {"prev_dtheta_hidden", m.prev_dtheta_hidden},
            {"prev_dw_ho", matrix_json(m.prev_dw_ho)},
            {"prev_dtheta_out", m.prev_dtheta_out}};
  return j.dump(2);
}

ModelBundle model_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    const auto type = j.at("type").get<std::string>();
    if (type == "svm") return svm_from(j);
    if (type == "mlp") return mlp_from(j);
    throw DataError(fmt::format("unknown model type '{}'", type));
  } catch (const json::exception& e) {
    throw DataError(fmt::format("malformed model file: {}", e.what()));
  }
}

void save_model(const std::filesystem::path& path, const ModelBundle& b) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << std::visit([](const auto& m) { return to_json(m); }, b) << '\n';
}

ModelBundle load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

std::string to_json(const EvaluationReport& r, std::string_view method) {
  json records = json::array();
  for (const auto& rec : r.records) {
    records.push_back({{"index", rec.index}, {"truth", to_int(rec.truth)}, {"predicted", to_int(rec.predicted)}});
  }
  json j = {{"n", r.n},
            {"type1_count", r.type1},
            {"type2_count", r.type2},
            {"errors", r.errors()},
            {"type1_rate", r.type1_rate()},
            {"type2_rate", r.type2_rate()},
            {"error_rate", r.error_rate()},
            {"accuracy", r.accuracy},
            {"records", std::move(records)}};
  if (!method.empty()) j["method"] = std::string(method);
  return j.dump(2);
}

void write_trace_csv(std::ostream& out, const TrainingTrace& t) {
  out << "epoch,rms\n";
  for (std::size_t i = 0; i < t.rms.size(); ++i) out << fmt::format("{},{}\n", i + 1, t.rms[i]);
}

void write_grid_csv(std::ostream& out, const GridSearchResult& g) {
  const std::size_t k = g.grid.empty() ? 0 : g.grid.front().cv.fold_accuracy.size();
  out << "C,gamma";
  for (std::size_t f = 0; f < k; ++f) out << ",fold" << f;
  out << ",mean\n";
  for (const auto& p : g.grid) {
    out << fmt::format("{},{}", p.C, p.gamma);
    for (double a : p.cv.fold_accuracy) out << fmt::format(",{}", a);
    out << fmt::format(",{}\n", p.cv.mean);
  }
}

void write_records_csv(std::ostream& out, const EvaluationReport& r) {
  out << "index,truth,predicted\n";
  for (const auto& rec : r.records) {
    out << fmt::format("{},{},{}\n", rec.index, to_int(rec.truth), to_int(rec.predicted));
  }
}

}  // namespace distress
