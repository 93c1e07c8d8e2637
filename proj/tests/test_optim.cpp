#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "vpmc/errors.hpp"
#include "vpmc/optim.hpp"

using namespace vpmc;
using namespace vpmc::optim;

namespace {

Objective quadratic(std::vector<double> target) {
  return [target](std::span<const double> a) {
    ObjectiveValue v;
    v.grad.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      v.grad[i] = a[i] - target[i];
      v.loss += 0.5 * v.grad[i] * v.grad[i];
    }
    return v;
  };
}

}  // namespace

TEST_SUITE("optim") {
  TEST_CASE("initial state") {
    Hyperparameters h;
    const auto s = OptimState::initial(3, h);
    CHECK(s.params == std::vector<double>(3, 0.0));
    CHECK(s.w == std::vector<double>(3, 0.0));
    CHECK(s.dbar == std::vector<double>(3, 0.0));
    CHECK(s.eta == std::vector<double>(3, h.eta0));
    CHECK(s.iter == 0);
    CHECK(h.resolved_kappa() == doctest::Approx(0.01));
  }

  TEST_CASE("Jacobs branches") {
    Hyperparameters h;
    h.eta0 = 0.5;
    h.kappa = 0.05;
    h.gamma = 0.3;
    h.theta = 0.7;
    auto s = OptimState::initial(3, h);
    s.dbar = {1.0, 1.0, 0.0};
    const std::vector<double> g{2.0, -1.0, 5.0};
    jacobs_update(s, g);
    CHECK(s.eta[0] == 0.5 + 0.05);
    CHECK(s.eta[1] == (1.0 - 0.3) * 0.5);
    CHECK(s.eta[2] == 0.5);
    CHECK(s.dbar[0] == (1.0 - 0.7) * 2.0 + 0.7 * 1.0);
    CHECK(s.dbar[1] == (1.0 - 0.7) * -1.0 + 0.7 * 1.0);
    CHECK(s.dbar[2] == (1.0 - 0.7) * 5.0);
    // a zero gradient component leaves its rate alone
    s.dbar = {1.0, -1.0, 2.0};
    const auto eta = s.eta;
    jacobs_update(s, std::vector<double>{0.0, 0.0, 0.0});
    CHECK(s.eta == eta);
  }

  TEST_CASE("vanilla gradient descent is reproduced bit for bit") {
    Hyperparameters h;
    h.beta = 0.0;
    h.kappa = 0.0;
    h.gamma = 0.0;
    h.eta0 = 0.05;
    auto s = OptimState::initial(4, h);
    std::vector<double> plain(4, 0.0);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> nd;
    for (int it = 0; it < 200; ++it) {
      std::vector<double> g(4);
      for (auto& x : g) x = nd(rng);
      momentum_update(s, g);
      for (int i = 0; i < 4; ++i) plain[i] = plain[i] - 0.05 * g[i];
      REQUIRE(s.params == plain);
    }
    CHECK(s.iter == 200);
  }

  TEST_CASE("momentum unrolls as expected") {
    Hyperparameters h;
    h.kappa = 0.0;
    h.eta0 = 0.1;
    auto s = OptimState::initial(2, h);
    const std::vector<double> g{1.0, -2.0};
    momentum_update(s, g);
    const auto p1 = s.params;
    momentum_update(s, g);
    for (int i = 0; i < 2; ++i) CHECK(s.params[i] - p1[i] == doctest::Approx(-0.1 * 1.9 * g[i]).epsilon(1e-15));

    auto z = OptimState::initial(2, h, std::vector<double>{0.3, -0.4});
    momentum_update(z, std::vector<double>{0.0, 0.0});
    CHECK(z.params == std::vector<double>{0.3, -0.4});
  }

  TEST_CASE("learning rates stay positive") {
    Hyperparameters h;
    h.gamma = 0.9;
    auto s = OptimState::initial(5, h);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    for (int it = 0; it < 2000; ++it) {
      std::vector<double> g(5);
      for (auto& x : g) x = nd(rng);
      jacobs_update(s, g);
      for (double e : s.eta) REQUIRE(e > 0.0);
    }
  }

  TEST_CASE("quadratic toy problem") {
    // Oracle values from an independent transcription of the update rules with
    // the default hyperparameters. The heavy ball at beta = 0.9 is underdamped,
    // so the loss is 9.25e-3 at iteration 50 and passes 1e-6 only near 100.
    Hyperparameters h;  // eta0 = 0.1
    h.max_iter = 101;
    h.grad_tol = 0.0;
    const std::vector<double> target{1.0, -2.0, 0.5, 3.0};
    const auto r = optimize(quadratic(target), std::vector<double>(4, 0.0), h);
    REQUIRE(r.records.size() == 101);
    CHECK(r.records[50].iter == 50);
    CHECK(r.records[50].loss == doctest::Approx(9.248812708045753e-3).epsilon(1e-10));
    CHECK(r.records[100].loss == doctest::Approx(4.1027609396642384e-7).epsilon(1e-8));
    CHECK(r.records[100].loss <= 1e-6);
    CHECK(r.best_loss <= r.records[100].loss);

    // without momentum the same problem is below 1e-6 well before iteration 50
    h.beta = 0.0;
    h.max_iter = 51;
    const auto plain = optimize(quadratic(target), std::vector<double>(4, 0.0), h);
    CHECK(plain.records[50].loss <= 1e-6);
  }

  TEST_CASE("stopping rule") {
    Hyperparameters h;
    h.eta0 = 0.1;
    // already optimal: one evaluation, parameters returned unchanged
    const std::vector<double> start{0.25, 0.5};
    auto r = optimize(quadratic(start), start, h);
    CHECK(r.status == Status::Converged);
    CHECK(r.records.size() == 1);
    CHECK(r.params == start);

    // fires on the first evaluation whose gradient norm is below the tolerance
    r = optimize(quadratic({1.0, 1.0}), std::vector<double>{0.0, 0.0}, h);
    REQUIRE(r.status == Status::Converged);
    for (std::size_t i = 0; i + 1 < r.records.size(); ++i) CHECK(r.records[i].grad_inf_norm >= 1e-3);
    CHECK(r.records.back().grad_inf_norm < 1e-3);

    // a gradient that never shrinks runs exactly max_iter evaluations
    int calls = 0;
    Objective flat = [&](std::span<const double> a) {
      ++calls;
      return ObjectiveValue{static_cast<double>(calls), std::vector<double>(a.size(), 1.0)};
    };
    h.max_iter = 1000;
    r = optimize(flat, std::vector<double>{0.0}, h);
    CHECK(r.status == Status::MaxIterations);
    CHECK(calls == 1000);
    CHECK(r.records.size() == 1000);
    CHECK(r.best_iter == 0);
    CHECK(r.params == std::vector<double>{0.0});
  }

  TEST_CASE("numeric failures end the run with the best parameters") {
    Hyperparameters h;
    int calls = 0;
    Objective obj = [&](std::span<const double> a) {
      ++calls;
      if (calls == 4) return ObjectiveValue{std::numeric_limits<double>::quiet_NaN(), std::vector<double>(a.size(), 1.0)};
      return ObjectiveValue{10.0 - calls, std::vector<double>(a.size(), 1.0)};
    };
    auto r = optimize(obj, std::vector<double>{0.0, 0.0}, h);
    CHECK(r.status == Status::NumericAbort);
    CHECK(r.best_iter == 2);
    CHECK(r.best_loss == 7.0);
    CHECK(r.params == r.records[2].params);

    calls = 0;
    Objective throwing = [&](std::span<const double>) -> ObjectiveValue {
      ++calls;
      throw NumericError("blow-up", 17);
    };
    r = optimize(throwing, std::vector<double>{0.0}, h);
    CHECK(r.status == Status::NumericAbort);
    CHECK(r.message.find("blow-up") != std::string::npos);

    auto s = OptimState::initial(1, h);
    CHECK_THROWS_AS(momentum_update(s, std::vector<double>{std::numeric_limits<double>::infinity()}), NumericError);
  }

  TEST_CASE("runs are deterministic") {
    Hyperparameters h;
    h.max_iter = 30;
    const auto a = optimize(quadratic({0.3, 0.7, -0.1}), std::vector<double>(3, 0.0), h);
    const auto b = optimize(quadratic({0.3, 0.7, -0.1}), std::vector<double>(3, 0.0), h);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      CHECK(a.records[i].loss == b.records[i].loss);
      CHECK(a.records[i].params == b.records[i].params);
    }
  }

  TEST_CASE("hyperparameter validation") {
    Hyperparameters h;
    CHECK_NOTHROW(h.validate());
    h.eta0 = 0.0;
    CHECK_THROWS_AS(h.validate(), ArgumentError);
    h = {};
    h.gamma = 1.0;
    CHECK_THROWS_AS(h.validate(), ArgumentError);
    h = {};
    h.max_iter = 0;
    CHECK_THROWS_AS(h.validate(), ArgumentError);
    CHECK(status_name(Status::Converged) == "converged");
  }
}
