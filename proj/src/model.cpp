#include "swarmlob/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace swarmlob {

namespace {

void require_finite(const char* field, double v) {
  if (!std::isfinite(v)) throw ParamError(field, "must be finite");
}

}  // namespace

ModelParams::ModelParams(const ParamSet& raw) : raw_(raw) {
  require_finite("lambda", raw.lambda);
  require_finite("mu", raw.mu);
  require_finite("theta1", raw.theta1);
  require_finite("theta2", raw.theta2);
  require_finite("c", raw.c);
  require_finite("alpha", raw.alpha);
  require_finite("beta", raw.beta);
  if (raw.lambda <= 0.0) throw ParamError("lambda", "must be > 0");
  if (raw.mu <= 0.0) throw ParamError("mu", "must be > 0");
  if (raw.lambda >= raw.mu) {
    throw ParamError("rho", "lambda/mu must be < 1 (buy-dominant market), got " +
                                std::to_string(raw.lambda / raw.mu));
  }
  if (!(raw.theta2 - raw.theta1 > 0.0)) {
    throw ParamError("delta_theta", "theta2 - theta1 must be > 0");
  }
  if (raw.c < 0.0) throw ParamError("c", "must be >= 0");
  if (raw.alpha < 0.0) throw ParamError("alpha", "must be >= 0");
  if (raw.beta < 0.0) throw ParamError("beta", "must be >= 0");
}

ModelParams ModelParams::with_c(double c) const {
  ParamSet r = raw_;
  r.c = c;
  return ModelParams(r);
}

ModelParams ModelParams::with_alpha(double alpha) const {
  ParamSet r = raw_;
  r.alpha = alpha;
  return ModelParams(r);
}

ModelParams ModelParams::with_beta(double beta) const {
  ParamSet r = raw_;
  r.beta = beta;
  return ModelParams(r);
}

ModelParams make_params(double rho, double mu, double delta_theta, double c, double alpha,
                        double beta, double theta1) {
  if (!std::isfinite(rho) || rho <= 0.0 || rho >= 1.0) {
    throw ParamError("rho", "must satisfy 0 < rho < 1");
  }
  if (!std::isfinite(delta_theta) || delta_theta <= 0.0) {
    throw ParamError("delta_theta", "must be > 0");
  }
  return ModelParams(ParamSet{rho * mu, mu, theta1, theta1 + delta_theta, c, alpha, beta});
}

void require_ratio(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
  }
}

double expected_wait_priority(const ModelParams& params, double p) {
  require_ratio(p);
  return 1.0 / (params.mu() - params.lambda() * p);
}

double expected_wait_low(const ModelParams& params, double p) {
  require_ratio(p);
  const double mu = params.mu();
  const double lambda = params.lambda();
  return mu / ((mu - lambda) * (mu - lambda * p));
}

double workload_conservation_residual(const ModelParams& params, double p) {
  const double w1 = expected_wait_priority(params, p);
  const double w2 = expected_wait_low(params, p);
  return p * w1 + (1.0 - p) * w2 - 1.0 / (params.mu() - params.lambda());
}

double expected_reward(const ModelParams& params, double p, PriceClass cls) {
  switch (cls) {
    case PriceClass::lower:
      return params.theta1() - params.c() * expected_wait_priority(params, p);
    case PriceClass::higher:
      return params.theta2() - params.c() * expected_wait_low(params, p);
  }
  throw std::domain_error("price class must be 1 or 2");
}

double g_value(const ModelParams& params, double p) {
  require_ratio(p);
  const double rho = params.rho();
  return (rho * params.c() / params.mu()) / ((1.0 - rho) * (1.0 - rho * p)) -
         params.delta_theta();
}

CriticalRatio critical_ratio(const ModelParams& params) {
  const double rho = params.rho();
  const double root =
      1.0 / rho - (params.c() / params.mu()) / (params.delta_theta() * (1.0 - rho));
  if (root > 0.0 && root < 1.0) return {CriticalRatio::Regime::interior, root};
  // g is increasing, so the sign at p = 0 decides the regime.
  const auto regime = g_value(params, 0.0) >= 0.0 ? CriticalRatio::Regime::none_below
                                                  : CriticalRatio::Regime::none_above;
  return {regime, root};
}

double g_lipschitz_constant(const ModelParams& params) {
  const double rho = params.rho();
  const double one_minus = 1.0 - rho;
  return rho * rho * (params.c() / params.mu()) / (one_minus * one_minus * one_minus);
}

}  // namespace swarmlob
