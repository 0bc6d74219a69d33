#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "distress/dataset.hpp"
#include "distress/error.hpp"
#include "distress/mlp.hpp"
#include "doctest.h"
#include "properties.hpp"

using namespace distress;

namespace {

Dataset tiny() {
  return Dataset({"a", "b", "c", "d"}, {{{0.1, -0.2, 0.3, 0.0}, Label::positive},
                                        {{-0.4, 0.5, -0.1, 0.2}, Label::negative},
                                        {{0.7, 0.1, 0.2, -0.3}, Label::positive},
                                        {{-0.2, -0.6, 0.4, 0.5}, Label::negative}});
}

MlpModel zero_model(const MlpConfig& cfg) {
  auto m = init_network(cfg);
  for (double* p : oracle::parameters(m)) *p = 0.0;
  return m;
}

// Saturated network: hidden unit 0 copies sign(x0), the output copies the
// hidden unit. tanh(50) rounds to exactly 1.0.
MlpModel saturated() {
  MlpConfig cfg;
  cfg.n_input = 2;
  cfg.n_hidden = 2;
  auto m = zero_model(cfg);
  m.w_ih(0, 0) = 100.0;
  m.w_ho(0, 0) = 50.0;
  return m;
}

}  // namespace

TEST_CASE("init_network") {
  const MlpConfig cfg;
  const auto m = init_network(cfg);
  CHECK(m.w_ih.rows == 4);
  CHECK(m.w_ih.cols == 4);
  CHECK(m.w_ho.rows == 4);
  CHECK(m.w_ho.cols == 1);
  CHECK(m.theta_hidden.size() == 4);
  CHECK(m.theta_out.size() == 1);
  auto copy = m;
  for (double* p : oracle::parameters(copy)) {
    CHECK(*p >= -0.5);
    CHECK(*p <= 0.5);
  }
  for (double v : m.prev_dw_ih.data) CHECK(v == 0.0);
  for (double v : m.prev_dw_ho.data) CHECK(v == 0.0);
  for (double v : m.prev_dtheta_hidden) CHECK(v == 0.0);
  for (double v : m.prev_dtheta_out) CHECK(v == 0.0);

  CHECK(init_network(cfg).same_parameters(m));
  MlpConfig other = cfg;
  other.seed = 2;
  CHECK_FALSE(init_network(other).same_parameters(m));
}

TEST_CASE("config validation") {
  MlpConfig cfg;
  CHECK(cfg.learning_rate_recommended());
  CHECK(cfg.momentum_recommended());
  cfg.learning_rate = 0.0;
  CHECK_THROWS_AS(validate(cfg), DataError);
  cfg = {};
  cfg.momentum = 1.0;
  CHECK_THROWS_AS(validate(cfg), DataError);
  cfg = {};
  cfg.n_hidden = 0;
  CHECK_THROWS_AS(init_network(cfg), DataError);
  cfg = {};
  cfg.learning_rate = 0.1;
  CHECK_NOTHROW(validate(cfg));
  CHECK_FALSE(cfg.learning_rate_recommended());
}

TEST_CASE("forward") {
  MlpConfig cfg;
  auto m = zero_model(cfg);
  const std::vector<double> x{0.3, -0.2, 0.9, 0.1};
  auto a = forward(m, x);
  for (double h : a.hidden) CHECK(h == 0.0);
  CHECK(a.output[0] == 0.0);
  CHECK(predict_mlp(m, x) == Label::positive);

  // Output threshold -0.5 with zero weights gives tanh(0.5).
  m.theta_out[0] = -0.5;
  a = forward(m, x);
  CHECK(a.output[0] == doctest::Approx(0.46211715726).epsilon(1e-10));

  m.w_ih(2, 1) = 1.0;
  m.theta_hidden[1] = 0.4;
  a = forward(m, x);
  CHECK(a.hidden[1] == doctest::Approx(std::tanh(0.9 - 0.4)));
  CHECK_THROWS_AS(forward(m, std::vector<double>{1.0}), DataError);
}

TEST_CASE("backward_deltas") {
  const auto m = init_network(MlpConfig{});
  const std::vector<double> x{0.3, -0.2, 0.9, 0.1};
  const auto a = forward(m, x);

  const auto same = backward_deltas(m, a, a.output);
  CHECK(same.output[0] == 0.0);
  for (double d : same.hidden) CHECK(d == 0.0);

  auto cut = m;
  for (auto& w : cut.w_ho.data) w = 0.0;
  const std::vector<double> t{1.0};
  const auto d = backward_deltas(cut, forward(cut, x), t);
  CHECK(d.output[0] != 0.0);
  for (double h : d.hidden) CHECK(h == 0.0);

  const double y = a.output[0];
  CHECK(backward_deltas(m, a, t).output[0] == doctest::Approx((1.0 - y) * (1.0 - y * y)));
  CHECK_THROWS_AS(backward_deltas(m, a, std::vector<double>{1.0, 1.0}), DataError);
}

TEST_CASE("apply_update momentum rule") {
  MlpConfig cfg;
  cfg.learning_rate = 0.7;
  const std::vector<double> x{0.3, -0.2, 0.9, 0.1};
  const std::vector<double> t{1.0};

  SUBCASE("zero momentum is plain gradient descent") {
    cfg.momentum = 0.0;
    auto m = init_network(cfg);
    const auto before = m;
    const auto a = forward(m, x);
    const auto d = backward_deltas(m, a, t);
    apply_update(m, x, a, d);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(m.w_ho(k, 0) - before.w_ho(k, 0) == doctest::Approx(0.7 * d.output[0] * a.hidden[k]));
      CHECK(m.theta_hidden[k] - before.theta_hidden[k] == doctest::Approx(-0.7 * d.hidden[k]));
      for (std::size_t i = 0; i < 4; ++i)
        CHECK(m.w_ih(i, k) - before.w_ih(i, k) == doctest::Approx(0.7 * d.hidden[k] * x[i]));
    }
    CHECK(m.theta_out[0] - before.theta_out[0] == doctest::Approx(-0.7 * d.output[0]));
  }

  SUBCASE("a repeated step adds alpha times the previous delta") {
    cfg.momentum = 0.3;
    auto m = init_network(cfg);
    const auto a = forward(m, x);
    const auto d = backward_deltas(m, a, t);
    apply_update(m, x, a, d);
    const auto mid = m;
    apply_update(m, x, a, d);
    for (std::size_t k = 0; k < 4; ++k) {
      const double first = 0.7 * d.output[0] * a.hidden[k];
      CHECK(m.w_ho(k, 0) - mid.w_ho(k, 0) == doctest::Approx(first * 1.3));
      CHECK(m.prev_dw_ho(k, 0) == doctest::Approx(first * 1.3));
    }
    CHECK(m.theta_out[0] - mid.theta_out[0] == doctest::Approx(-0.7 * d.output[0] * 1.3));
  }
}

TEST_CASE("rms_error") {
  const Dataset ds({"a", "b"}, {{{1.0, 0.0}, Label::positive}, {{-1.0, 0.0}, Label::negative}});
  CHECK(rms_error(saturated(), ds) == 0.0);

  MlpConfig cfg;
  cfg.n_input = 2;
  const auto zero = zero_model(cfg);
  CHECK(rms_error(zero, ds) == 1.0);

  // Y = +1 everywhere: errors 0 and 2, sqrt((0 + 4) / 2).
  auto high = zero;
  high.theta_out[0] = -50.0;
  CHECK(rms_error(high, ds) == doctest::Approx(std::sqrt(2.0)));

  const auto m = init_network(MlpConfig{});
  const auto t = tiny();
  const std::vector<std::size_t> rev = {3, 2, 1, 0};
  CHECK(rms_error(m, t.subset(rev)) == doctest::Approx(rms_error(m, t)).epsilon(1e-15));
}

TEST_CASE("training") {
  SUBCASE("loose target converges after one epoch") {
    MlpConfig cfg;
    cfg.rms_target = 1e9;
    const auto r = train_mlp(cfg, tiny());
    CHECK(r.trace.converged);
    CHECK(r.trace.epochs_run == 1);
    CHECK(r.trace.rms.size() == 1);
  }
  SUBCASE("zero-error fixed point") {
    const Dataset ds({"a", "b"}, {{{1.0, 0.3}, Label::positive},
                                  {{-1.0, -0.2}, Label::negative},
                                  {{0.5, 0.0}, Label::positive}});
    auto m = saturated();
    const auto before = m;
    const auto trace = train_mlp(m, ds);
    CHECK(trace.converged);
    CHECK(trace.rms.front() == 0.0);
    CHECK(m.same_parameters(before));
  }
  SUBCASE("small steps without momentum never raise the rms") {
    MlpConfig cfg;
    cfg.learning_rate = 0.01;
    cfg.momentum = 0.0;
    cfg.max_epochs = 100;
    cfg.rms_target = 1e-12;
    const auto r = train_mlp(cfg, tiny());
    REQUIRE(r.trace.rms.size() == 100);
    for (std::size_t e = 1; e < 100; ++e) CHECK(r.trace.rms[e] <= r.trace.rms[e - 1] + 1e-9);
  }
  SUBCASE("bit-exact determinism") {
    MlpConfig cfg;
    cfg.max_epochs = 300;
    const auto ds = apply_scaler(fit_scaler(bundled_training_set()), bundled_training_set());
    const auto a = train_mlp(cfg, ds);
    const auto b = train_mlp(cfg, ds);
    CHECK(a.model.same_parameters(b.model));
    CHECK(a.trace.rms == b.trace.rms);
  }
  SUBCASE("shape mismatches") {
    MlpConfig cfg;
    cfg.n_input = 3;
    CHECK_THROWS_AS(train_mlp(cfg, tiny()), DataError);
    cfg = {};
    cfg.n_output = 2;
    CHECK_THROWS_AS(train_mlp(cfg, tiny()), DataError);
  }
  SUBCASE("non-finite rms is reported") {
    auto s = tiny().samples();
    s[2].features[1] = std::numeric_limits<double>::quiet_NaN();
    const Dataset bad({"a", "b", "c", "d"}, s);
    MlpConfig cfg;
    cfg.max_epochs = 5;
    CHECK_THROWS_AS(train_mlp(cfg, bad), TrainingError);
  }
}

TEST_CASE("delta-rule gradients match finite differences") {
  const auto s = props::mlp_gradient_check(30, 77);
  CHECK(s.failures == 0);
  CHECK(s.worst_relative_error < 1e-4);
  const auto wide = props::mlp_gradient_check(10, 78, 3, 6, 2);
  CHECK(wide.failures == 0);
}
