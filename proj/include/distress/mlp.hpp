#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "distress/dataset.hpp"

namespace distress {

// Hyperparameters of the one-hidden-layer back-propagation network.
//
// The recommended ranges are 0.6-0.9 for the learning rate and 0.1-0.4 for
// the momentum; values outside them are allowed (callers may warn). A rough
// sizing rule for the hidden layer is h / (5 (m + n)) with h training
// patterns, m outputs and n inputs; it is not enforced.
struct MlpConfig {
  std::size_t n_input = 4;
  std::size_t n_hidden = 4;
  std::size_t n_output = 1;
  double learning_rate = 0.7;
  double momentum = 0.3;
  std::size_t max_epochs = 10000;
  double rms_target = 0.01;
  std::uint64_t seed = 1;

  bool learning_rate_recommended() const { return learning_rate >= 0.6 && learning_rate <= 0.9; }
  bool momentum_recommended() const { return momentum >= 0.1 && momentum <= 0.4; }
};

// Throws DataError for zero layer sizes, non-positive learning rate,
// momentum outside [0, 1), or a non-positive RMS target.
void validate(const MlpConfig& cfg);

// Row-major weight matrix: (rows = fan-in, cols = fan-out).
struct WeightMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  WeightMatrix() = default;
  WeightMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;
};

// Network state. Units compute f(sum_i w_i x_i - theta) with f = tanh.
struct MlpModel {
  MlpConfig config;
  WeightMatrix w_ih;  // n_input x n_hidden
  std::vector<double> theta_hidden;
  WeightMatrix w_ho;  // n_hidden x n_output
  std::vector<double> theta_out;

  // Previous deltas, reused through the momentum term.
  WeightMatrix prev_dw_ih;
  std::vector<double> prev_dtheta_hidden;
  WeightMatrix prev_dw_ho;
  std::vector<double> prev_dtheta_out;

  // Parameter-wise equality (config excluded).
  bool same_parameters(const MlpModel& other) const;
};

struct Activations {
  std::vector<double> hidden;  // H
  std::vector<double> output;  // Y
};

struct Deltas {
  std::vector<double> output;
  std::vector<double> hidden;
};

struct TrainingTrace {
  std::vector<double> rms;
  std::size_t epochs_run = 0;
  bool converged = false;
};

struct MlpTrainResult {
  MlpModel model;
  TrainingTrace trace;
};

// Weights and thresholds uniform on [-0.5, 0.5]; momentum state zero.
MlpModel init_network(const MlpConfig& cfg);

Activations forward(const MlpModel& m, std::span<const double> x);

// delta_out_j    = (T_j - Y_j) f'(net_j)
// delta_hidden_k = (sum_j delta_out_j w_kj) f'(net_k)
// with f'(net) = 1 - f(net)^2 taken from the cached activations.
Deltas backward_deltas(const MlpModel& m, const Activations& act, std::span<const double> target);

// One momentum step, in place:
//   dw_kj = eta d_j H_k + alpha dw_kj(prev),  dtheta_j = -eta d_j + alpha dtheta_j(prev)
// and likewise for the hidden layer with the inputs x_i.
void apply_update(MlpModel& m, std::span<const double> x, const Activations& act, const Deltas& d);

// Online training in dataset order. Labels +1/-1 are the targets. Stops
// once the epoch RMS falls below cfg.rms_target or after cfg.max_epochs.
MlpTrainResult train_mlp(const MlpConfig& cfg, const Dataset& ds);

// Continues training an existing model (its config governs the run).
TrainingTrace train_mlp(MlpModel& m, const Dataset& ds);

// sqrt(sum over samples and outputs of (Y - T)^2 / n_samples).
double rms_error(const MlpModel& m, const Dataset& ds);

// +1 when Y_1 >= 0, else -1.
Label predict_mlp(const MlpModel& m, std::span<const double> x);

}  // namespace distress
