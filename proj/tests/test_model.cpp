#include <doctest.h>

#include <cmath>
#include <random>

#include "swarmlob/model.hpp"

using namespace swarmlob;

namespace {

ModelParams market(double lambda, double mu = 1.0, double c = 0.03, double theta1 = 0.0,
                   double theta2 = 1.0) {
  return ModelParams(ParamSet{lambda, mu, theta1, theta2, c, 5.0, 0.1});
}

// Independent oracles written straight from the queueing formulas.
double oracle_w1(double lambda, double mu, double p) { return 1.0 / (mu - lambda * p); }
double oracle_w2(double lambda, double mu, double p) {
  return mu / ((mu - lambda) * (mu - lambda * p));
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(ModelParams{});
  CHECK_THROWS_AS(market(1.0), ParamError);
  CHECK_THROWS_AS(market(1.2), ParamError);
  CHECK_THROWS_AS(market(0.0), ParamError);
  CHECK_THROWS_AS(market(0.5, 1.0, -0.1), ParamError);
  CHECK_THROWS_AS(market(0.5, 1.0, 0.03, 1.0, 1.0), ParamError);
  CHECK_THROWS_AS(ModelParams(ParamSet{0.5, 1.0, 0.0, 1.0, 0.03, -1.0, 0.1}), ParamError);
  CHECK_THROWS_AS(ModelParams(ParamSet{0.5, 1.0, 0.0, 1.0, 0.03, 5.0, NAN}), ParamError);

  try {
    market(1.5);
    FAIL("expected rejection");
  } catch (const ParamError& e) {
    CHECK(e.field() == "rho");
  }

  const auto p = make_params(0.9, 2.0, 1.5, 0.03, 5.0, 0.1, 10.0);
  CHECK(p.lambda() == doctest::Approx(1.8));
  CHECK(p.theta2() == doctest::Approx(11.5));
  CHECK(p.delta_theta() == doctest::Approx(1.5));
}

TEST_CASE("expected_wait_priority") {
  CHECK(expected_wait_priority(market(0.9), 0.9) == doctest::Approx(5.2631579).epsilon(1e-8));
  CHECK(expected_wait_priority(market(0.9), 0.9) == doctest::Approx(oracle_w1(0.9, 1, 0.9)));
  CHECK(expected_wait_priority(market(0.9), 0.0) == 1.0);
  CHECK(expected_wait_priority(market(0.5), 1.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(expected_wait_priority(market(0.9), 1.01), std::domain_error);
  CHECK_THROWS_AS(expected_wait_priority(market(0.9), -0.01), std::domain_error);
}

TEST_CASE("expected_wait_low") {
  CHECK(expected_wait_low(market(0.9), 0.9) == doctest::Approx(52.631579).epsilon(1e-8));
  CHECK(expected_wait_low(market(0.9), 0.9) == doctest::Approx(oracle_w2(0.9, 1, 0.9)));
  CHECK(expected_wait_low(market(0.9), 0.0) == doctest::Approx(10.0));
  CHECK(expected_wait_low(market(0.5), 0.5) == doctest::Approx(2.6666667).epsilon(1e-8));
  CHECK_THROWS_AS(expected_wait_low(market(0.9), NAN), std::domain_error);
}

TEST_CASE("workload conservation residual") {
  CHECK(std::abs(workload_conservation_residual(market(0.9), 0.9)) < 1e-12);
  CHECK(std::abs(workload_conservation_residual(market(0.9), 0.0)) < 1e-12);
  CHECK(std::abs(workload_conservation_residual(market(0.5), 0.3)) < 1e-12);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rho_d(0.05, 0.99);
  std::uniform_real_distribution<double> mu_d(0.1, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double mu = mu_d(rng);
    const auto params = market(rho_d(rng) * mu, mu);
    const double p = unit(rng);
    const double scale = 1.0 / (params.mu() - params.lambda());
    CHECK(std::abs(workload_conservation_residual(params, p)) <= 1e-10 * scale);
  }
}

TEST_CASE("expected_reward") {
  const auto p = market(0.9, 1.0, 0.03, 10.0, 11.0);
  CHECK(expected_reward(p, 0.9, PriceClass::lower) == doctest::Approx(9.8421053).epsilon(1e-8));
  CHECK(expected_reward(p, 0.9, PriceClass::higher) == doctest::Approx(9.4210526).epsilon(1e-8));
  const auto free = market(0.9, 1.0, 0.0, 10.0, 11.0);
  for (double q : {0.0, 0.4, 1.0}) {
    CHECK(expected_reward(free, q, PriceClass::lower) == 10.0);
    CHECK(expected_reward(free, q, PriceClass::higher) == 11.0);
  }
  CHECK_THROWS_AS(expected_reward(p, 0.5, static_cast<PriceClass>(3)), std::domain_error);
}

TEST_CASE("g_value") {
  const ModelParams ref;
  CHECK(std::abs(g_value(ref, 73.0 / 90.0)) < 1e-9);
  CHECK(g_value(ref, 1.0) == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(g_value(ref, 0.0) == doctest::Approx(-0.73).epsilon(1e-12));
  CHECK_THROWS_AS(g_value(ref, 2.0), std::domain_error);
}

TEST_CASE("critical_ratio regimes") {
  const ModelParams ref;
  const auto pe = critical_ratio(ref);
  REQUIRE(pe.interior());
  CHECK(pe.value == doctest::Approx(0.811111).epsilon(1e-6));
  CHECK(std::abs(g_value(ref, pe.value)) < 1e-12);

  const auto free = critical_ratio(ref.with_c(0.0));
  CHECK(free.regime == CriticalRatio::Regime::none_above);

  const auto costly = critical_ratio(ref.with_c(0.2));
  CHECK(costly.regime == CriticalRatio::Regime::none_below);
  CHECK(costly.value == doctest::Approx(1.0 / 0.9 - 2.0));
  CHECK(g_value(ref.with_c(0.2), 0.0) > 0.0);
}

TEST_CASE("g_lipschitz_constant") {
  CHECK(g_lipschitz_constant(ModelParams{}) == doctest::Approx(24.3).epsilon(1e-12));
  CHECK(g_lipschitz_constant(ModelParams{}.with_c(0.0)) == 0.0);
  CHECK(g_lipschitz_constant(market(0.5, 1.0, 0.1)) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("properties over random markets") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> rho_d(0.05, 0.99);
  std::uniform_real_distribution<double> c_d(0.0, 0.2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int trial = 0; trial < 200; ++trial) {
    const auto params = make_params(rho_d(rng), 1.0, 0.5 + unit(rng), c_d(rng), 5.0, 0.1);
    const double lip = g_lipschitz_constant(params);

    // Monotone on a 1e-3 grid, W2 >= W1.
    double w1_prev = 0.0;
    double w2_prev = 0.0;
    double g_prev = -INFINITY;
    for (int i = 0; i <= 1000; ++i) {
      const double p = i / 1000.0;
      const double w1 = expected_wait_priority(params, p);
      const double w2 = expected_wait_low(params, p);
      const double g = g_value(params, p);
      CHECK(w1 >= w1_prev);
      CHECK(w2 >= w2_prev);
      CHECK(g >= g_prev);
      CHECK(w2 > w1);
      const double reward_gap = expected_reward(params, p, PriceClass::lower) -
                                expected_reward(params, p, PriceClass::higher);
      CHECK(std::abs(g - reward_gap) < 1e-12 * std::max(1.0, std::abs(reward_gap)));
      w1_prev = w1;
      w2_prev = w2;
      g_prev = g;
    }

    for (int k = 0; k < 50; ++k) {
      const double p = unit(rng);
      const double q = unit(rng);
      CHECK(g_value(params, p) - g_value(params, q) <= lip * std::abs(p - q) + 1e-12);
    }

    const auto pe = critical_ratio(params);
    if (pe.interior()) {
      CHECK(std::abs(g_value(params, pe.value)) < 1e-12);
      if (pe.value > 1e-6) CHECK(g_value(params, pe.value - 1e-6) < 0.0);
      if (pe.value < 1.0 - 1e-6) CHECK(g_value(params, pe.value + 1e-6) > 0.0);
    } else if (pe.regime == CriticalRatio::Regime::none_below) {
      CHECK(g_value(params, 0.0) >= 0.0);
    } else {
      CHECK(g_value(params, 1.0) <= 0.0);
    }
  }
}
