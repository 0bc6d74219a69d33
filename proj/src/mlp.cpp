#include "distress/mlp.hpp"

#include <cmath>

#include <fmt/format.h>

#include "distress/error.hpp"
#include "distress/random.hpp"

namespace distress {

void validate(const MlpConfig& cfg) {
  if (cfg.n_input == 0 || cfg.n_hidden == 0 || cfg.n_output == 0) {
    throw DataError("layer sizes must be positive");
  }
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw DataError(fmt::format("learning rate must be positive, got {}", cfg.learning_rate));
  }
  if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) {
    throw DataError(fmt::format("momentum must lie in [0, 1), got {}", cfg.momentum));
  }
  if (!(cfg.rms_target > 0.0)) throw DataError("rms target must be positive");
  if (cfg.max_epochs == 0) throw DataError("max_epochs must be positive");
}

bool MlpModel::same_parameters(const MlpModel& o) const {
  return w_ih == o.w_ih && theta_hidden == o.theta_hidden && w_ho == o.w_ho &&
         theta_out == o.theta_out && prev_dw_ih == o.prev_dw_ih &&
         prev_dtheta_hidden == o.prev_dtheta_hidden && prev_dw_ho == o.prev_dw_ho &&
         prev_dtheta_out == o.prev_dtheta_out;
}

MlpModel init_network(const MlpConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  auto draw = [&rng] { return rng.uniform(-0.5, 0.5); };

  MlpModel m;
  m.config = cfg;
  m.w_ih = WeightMatrix(cfg.n_input, cfg.n_hidden);
  for (auto& w : m.w_ih.data) w = draw();
  m.theta_hidden.resize(cfg.n_hidden);
  for (auto& t : m.theta_hidden) t = draw();
  m.w_ho = WeightMatrix(cfg.n_hidden, cfg.n_output);
  for (auto& w : m.w_ho.data) w = draw();
  m.theta_out.resize(cfg.n_output);
  for (auto& t : m.theta_out) t = draw();

  m.prev_dw_ih = WeightMatrix(cfg.n_input, cfg.n_hidden);
  m.prev_dtheta_hidden.assign(cfg.n_hidden, 0.0);
  m.prev_dw_ho = WeightMatrix(cfg.n_hidden, cfg.n_output);
  m.prev_dtheta_out.assign(cfg.n_output, 0.0);
  return m;
}

Activations forward(const MlpModel& m, std::span<const double> x) {
  if (x.size() != m.w_ih.rows) {
    throw DataError(fmt::format("network expects {} inputs, got {}", m.w_ih.rows, x.size()));
  }
  Activations a;
  a.hidden.resize(m.w_ih.cols);
  for (std::size_t k = 0; k < m.w_ih.cols; ++k) {
    double net = -m.theta_hidden[k];
    for (std::size_t i = 0; i < x.size(); ++i) net += m.w_ih(i, k) * x[i];
    a.hidden[k] = std::tanh(net);
  }
  a.output.resize(m.w_ho.cols);
  for (std::size_t j = 0; j < m.w_ho.cols; ++j) {
    double net = -m.theta_out[j];
    for (std::size_t k = 0; k < a.hidden.size(); ++k) net += m.w_ho(k, j) * a.hidden[k];
    a.output[j] = std::tanh(net);
  }
  return a;
}

Deltas backward_deltas(const MlpModel& m, const Activations& act, std::span<const double> target) {
  if (target.size() != act.output.size()) {
    throw DataError(fmt::format("expected {} targets, got {}", act.output.size(), target.size()));
  }
  Deltas d;
  d.output.resize(act.output.size());
  for (std::size_t j = 0; j < act.output.size(); ++j) {
    const double y = act.output[j];
    d.output[j] = (target[j] - y) * (1.0 - y * y);
  }
  d.hidden.resize(act.hidden.size());
  for (std::size_t k = 0; k < act.hidden.size(); ++k) {
    double back = 0.0;
    for (std::size_t j = 0; j < d.output.size(); ++j) back += d.output[j] * m.w_ho(k, j);
    const double h = act.hidden[k];
    d.hidden[k] = back * (1.0 - h * h);
  }
  return d;
}

void apply_update(MlpModel& m, std::span<const double> x, const Activations& act, const Deltas& d) {
  const double eta = m.config.learning_rate;
  const double mom = m.config.momentum;

  for (std::size_t k = 0; k < m.w_ho.rows; ++k) {
    for (std::size_t j = 0; j < m.w_ho.cols; ++j) {
      const double dw = eta * d.output[j] * act.hidden[k] + mom * m.prev_dw_ho(k, j);
      m.w_ho(k, j) += dw;
      m.prev_dw_ho(k, j) = dw;
    }
  }
  for (std::size_t j = 0; j < m.theta_out.size(); ++j) {
    const double dt = -eta * d.output[j] + mom * m.prev_dtheta_out[j];
    m.theta_out[j] += dt;
    m.prev_dtheta_out[j] = dt;
  }
  for (std::size_t i = 0; i < m.w_ih.rows; ++i) {
    for (std::size_t k = 0; k < m.w_ih.cols; ++k) {
      const double dw = eta * d.hidden[k] * x[i] + mom * m.prev_dw_ih(i, k);
      m.w_ih(i, k) += dw;
      m.prev_dw_ih(i, k) = dw;
    }
  }
  for (std::size_t k = 0; k < m.theta_hidden.size(); ++k) {
    const double dt = -eta * d.hidden[k] + mom * m.prev_dtheta_hidden[k];
    m.theta_hidden[k] += dt;
    m.prev_dtheta_hidden[k] = dt;
  }
}

double rms_error(const MlpModel& m, const Dataset& ds) {
  double sum = 0.0;
  for (const auto& s : ds.samples()) {
    const auto act = forward(m, s.features);
    for (double y : act.output) {
      const double e = y - to_double(s.label);
      sum += e * e;
    }
  }
  return std::sqrt(sum / static_cast<double>(ds.size()));
}

TrainingTrace train_mlp(MlpModel& m, const Dataset& ds) {
  const auto& cfg = m.config;
  validate(cfg);
  if (cfg.n_output != 1) throw DataError("binary training needs exactly one output unit");
  if (ds.dim() != cfg.n_input) {
    throw DataError(fmt::format("network expects {} inputs, dataset has {}", cfg.n_input, ds.dim()));
  }

  TrainingTrace trace;
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    for (const auto& s : ds.samples()) {
      const double target = to_double(s.label);
      const auto act = forward(m, s.features);
      const auto d = backward_deltas(m, act, {&target, 1});
      apply_update(m, s.features, act, d);
    }
    const double rms = rms_error(m, ds);
    if (!std::isfinite(rms)) throw TrainingError(fmt::format("non-finite RMS at epoch {}", epoch));
    trace.rms.push_back(rms);
    trace.epochs_run = epoch;
    if (rms < cfg.rms_target) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

MlpTrainResult train_mlp(const MlpConfig& cfg, const Dataset& ds) {
  MlpTrainResult r{init_network(cfg), {}};
  r.trace = train_mlp(r.model, ds);
  return r;
}

Label predict_mlp(const MlpModel& m, std::span<const double> x) {
  return forward(m, x).output.front() >= 0.0 ? Label::positive : Label::negative;
}

}  // namespace distress
