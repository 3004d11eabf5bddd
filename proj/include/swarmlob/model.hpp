#pragma once

#include <stdexcept>
#include <string>

namespace swarmlob {

// Raised when a parameter set or configuration fails validation. `field()`
// names the offending input so front ends can report it verbatim.
class ParamError : public std::invalid_argument {
public:
  ParamError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

// Unvalidated inputs. Defaults are the reference market used throughout:
// rho = 0.9 with mu = 1, a one-tick spread, c = 0.03, alpha = 5, beta = 0.1.
struct ParamSet {
  double lambda = 0.9;  // sell-order arrival rate
  double mu = 1.0;      // buy-order arrival rate
  double theta1 = 0.0;  // lower limit price (priority class)
  double theta2 = 1.0;  // higher limit price
  double c = 0.03;      // waiting cost per unit time
  double alpha = 5.0;   // gain sensitivity of switching
  double beta = 0.1;    // zero-intelligence switching rate
};

// Validated market/behaviour constants. Every instance satisfies
// 0 < rho < 1, theta2 > theta1 and non-negative finite rates.
class ModelParams {
public:
  ModelParams() : ModelParams(ParamSet{}) {}
  explicit ModelParams(const ParamSet& raw);

  double lambda() const noexcept { return raw_.lambda; }
  double mu() const noexcept { return raw_.mu; }
  double rho() const noexcept { return raw_.lambda / raw_.mu; }
  double theta1() const noexcept { return raw_.theta1; }
  double theta2() const noexcept { return raw_.theta2; }
  double delta_theta() const noexcept { return raw_.theta2 - raw_.theta1; }
  double c() const noexcept { return raw_.c; }
  double alpha() const noexcept { return raw_.alpha; }
  double beta() const noexcept { return raw_.beta; }
  const ParamSet& raw() const noexcept { return raw_; }

  ModelParams with_c(double c) const;
  ModelParams with_alpha(double alpha) const;
  ModelParams with_beta(double beta) const;

  friend bool operator==(const ModelParams& a, const ModelParams& b) noexcept {
    const auto& x = a.raw_;
    const auto& y = b.raw_;
    return x.lambda == y.lambda && x.mu == y.mu && x.theta1 == y.theta1 &&
           x.theta2 == y.theta2 && x.c == y.c && x.alpha == y.alpha && x.beta == y.beta;
  }

private:
  ParamSet raw_;
};

// Builds the parameter set from (rho, delta_theta) instead of (lambda, theta2).
ModelParams make_params(double rho, double mu, double delta_theta, double c, double alpha,
                        double beta, double theta1 = 0.0);

enum class PriceClass { lower = 1, higher = 2 };

// Stationary sojourn time of a priority (theta1) order when a fraction p of
// sell orders is placed at theta1: 1 / (mu - lambda p).
double expected_wait_priority(const ModelParams& params, double p);

// Stationary sojourn time of a theta2 order: mu / ((mu - lambda)(mu - lambda p)).
double expected_wait_low(const ModelParams& params, double p);

// p E[W1] + (1 - p) E[W2] - 1/(mu - lambda). Zero up to rounding.
double workload_conservation_residual(const ModelParams& params, double p);

// theta_i - c E[W_i].
double expected_reward(const ModelParams& params, double p, PriceClass cls);

// Expected gain of choosing theta1 over theta2 given market ratio p.
double g_value(const ModelParams& params, double p);

struct CriticalRatio {
  enum class Regime {
    interior,    // g changes sign at value in (0, 1)
    none_below,  // g > 0 on [0, 1]: theta1 always preferred
    none_above,  // g < 0 on [0, 1]: theta2 always preferred
  };
  Regime regime;
  double value;  // closed-form root, meaningful in every regime

  bool interior() const noexcept { return regime == Regime::interior; }
};

CriticalRatio critical_ratio(const ModelParams& params);

// Upper bound on dg/dp over [0, 1] (attained at p = 1 by convexity).
double g_lipschitz_constant(const ModelParams& params);

// Throws std::domain_error unless 0 <= p <= 1.
void require_ratio(double p, const char* what = "p");

}  // namespace swarmlob
