#include "swarmlob/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace swarmlob {

namespace {

// Same formulas as the public entry points, without the [0, 1] check: RK4
// stages may probe a hair outside the unit interval.
//
// g is a difference of two O(delta_theta) terms; a result within rounding of
// zero is snapped to exactly zero so the critical ratio is a true stationary
// point of the discrete flow when beta = 0.
double gain(const ModelParams& params, double p) {
  const double rho = params.rho();
  const double cost = (rho * params.c() / params.mu()) / ((1.0 - rho) * (1.0 - rho * p));
  const double g = cost - params.delta_theta();
  const double noise = 16.0 * std::numeric_limits<double>::epsilon() *
                       std::max(cost, params.delta_theta());
  return std::abs(g) <= noise ? 0.0 : g;
}

TransitionRates rates_unchecked(const ModelParams& params, double p) {
  const double g = gain(params, p);
  const double g_plus = std::max(0.0, g);
  const double g_minus = -std::min(0.0, g);
  return {params.beta() + params.alpha() * g_minus, params.beta() + params.alpha() * g_plus};
}

// -alpha1 x + alpha2 (1 - x), split into its random-switching and gain parts
// so that alpha = 0 gives beta (1 - 2x) bit for bit.
double drift_unchecked(const ModelParams& params, double x) {
  const double g = gain(params, x);
  const double g_plus = std::max(0.0, g);
  const double g_minus = -std::min(0.0, g);
  return params.beta() * (1.0 - 2.0 * x) + params.alpha() * (g_plus * (1.0 - x) - g_minus * x);
}

AffineCoefficients affine_unchecked(const ModelParams& params, double p) {
  const auto r = rates_unchecked(params, p);
  return {-(r.alpha1 + r.alpha2), r.alpha2};
}

double clamp_step(double x, double t) {
  if (x >= 0.0 && x <= 1.0) return x;
  if (x < 0.0 && x >= -kClampTolerance) return 0.0;
  if (x > 1.0 && x <= 1.0 + kClampTolerance) return 1.0;
  throw IntegrationFault("integration left [0, 1] at t = " + std::to_string(t) +
                         " (x = " + std::to_string(x) + ")");
}

void check_grid(double t_end, int n_steps) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be > 0");
  if (n_steps < 2) throw std::invalid_argument("n_steps must be >= 2");
}

}  // namespace

PredictionPath::PredictionPath(double t_end, std::vector<double> values)
    : t_end_(t_end), values_(std::move(values)) {
  check_grid(t_end_, static_cast<int>(values_.size()) - 1);
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::domain_error("prediction path values must lie in [0, 1], got " +
                              std::to_string(v));
    }
  }
}

PredictionPath PredictionPath::constant(double t_end, int n_steps, double value) {
  check_grid(t_end, n_steps);
  return PredictionPath(t_end, std::vector<double>(static_cast<std::size_t>(n_steps) + 1, value));
}

double PredictionPath::midpoint(int k) const noexcept {
  const int n = n_steps();
  const auto at = [this](int i) { return values_[static_cast<std::size_t>(i)]; };
  double v;
  if (n < 3) {
    v = 0.5 * (at(k) + at(k + 1));
  } else if (k == 0) {
    v = (5.0 * at(0) + 15.0 * at(1) - 5.0 * at(2) + at(3)) / 16.0;
  } else if (k == n - 1) {
    v = (at(n - 3) - 5.0 * at(n - 2) + 15.0 * at(n - 1) + 5.0 * at(n)) / 16.0;
  } else {
    v = (-at(k - 1) + 9.0 * at(k) + 9.0 * at(k + 1) - at(k + 2)) / 16.0;
  }
  return std::clamp(v, 0.0, 1.0);
}

double sup_distance(const PredictionPath& a, const PredictionPath& b) {
  if (!a.same_grid(b)) throw std::invalid_argument("paths are sampled on different grids");
  double sup = 0.0;
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) sup = std::max(sup, std::abs(va[i] - vb[i]));
  return sup;
}

PredictionPath initial_prediction(InitialPrediction kind, double p0, double t_end, int n_steps) {
  require_ratio(p0, "p0");
  switch (kind) {
    case InitialPrediction::decreasing:
      return PredictionPath::sample(t_end, n_steps,
                                    [p0](int, double t) { return p0 * std::exp(-t); });
    case InitialPrediction::oscillating:
      return PredictionPath::sample(t_end, n_steps, [n_steps](int k, double) {
        const int piece = std::min(5, 6 * k / n_steps);
        return piece % 2 == 0 ? 0.0 : 1.0;
      });
    case InitialPrediction::constant:
      return PredictionPath::constant(t_end, n_steps, p0);
  }
  throw std::invalid_argument("unknown initial prediction kind");
}

InitialPrediction parse_initial_prediction(const std::string& name) {
  if (name == "decreasing") return InitialPrediction::decreasing;
  if (name == "oscillating") return InitialPrediction::oscillating;
  if (name == "static" || name == "constant") return InitialPrediction::constant;
  throw std::invalid_argument("unknown initial prediction '" + name +
                              "' (expected decreasing, oscillating or static)");
}

std::string to_string(InitialPrediction kind) {
  switch (kind) {
    case InitialPrediction::decreasing: return "decreasing";
    case InitialPrediction::oscillating: return "oscillating";
    case InitialPrediction::constant: return "static";
  }
  return "?";
}

TransitionRates rates_at(const ModelParams& params, double p) {
  require_ratio(p);
  return rates_unchecked(params, p);
}

AffineCoefficients affine_coefficients(const ModelParams& params, double p) {
  require_ratio(p);
  return affine_unchecked(params, p);
}

double drift(const ModelParams& params, double x) {
  require_ratio(x, "x");
  return drift_unchecked(params, x);
}

PredictionPath solve_linear_step(const ModelParams& params, const PredictionPath& driving,
                                 double p0) {
  require_ratio(p0, "p0");
  const int n = driving.n_steps();
  const double h = driving.step();
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  double x = p0;
  out[0] = x;
  auto start = affine_unchecked(params, driving[0]);
  for (int k = 0; k < n; ++k) {
    const auto mid = affine_unchecked(params, driving.midpoint(k));
    const auto end = affine_unchecked(params, driving[k + 1]);
    const double k1 = start.a * x + start.b;
    const double k2 = mid.a * (x + 0.5 * h * k1) + mid.b;
    const double k3 = mid.a * (x + 0.5 * h * k2) + mid.b;
    const double k4 = end.a * (x + h * k3) + end.b;
    x = clamp_step(x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), driving.time(k + 1));
    out[static_cast<std::size_t>(k) + 1] = x;
    start = end;
  }
  return PredictionPath(driving.t_end(), std::move(out));
}

double residual_tolerance(double tol) { return std::max(10.0 * tol, 1e-6); }

PicardResult picard_iterate(const ModelParams& params, const PredictionPath& x0, double p0,
                            const PicardOptions& options) {
  if (!(options.tol > 0.0) || !std::isfinite(options.tol)) {
    throw std::invalid_argument("tol must be a positive finite number");
  }
  if (options.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  require_ratio(p0, "p0");

  PicardResult result{x0, {}, {}};
  auto& report = result.report;
  for (int n = 1; n <= options.max_iters; ++n) {
    PredictionPath next = solve_linear_step(params, result.limit, p0);
    const double diff = sup_distance(next, result.limit);
    report.sup_diffs.push_back(diff);
    report.n_iters = n;
    if (options.keep_iterates) result.iterates.push_back(next);
    result.limit = std::move(next);
    if (diff <= options.tol) break;
  }
  report.residual = fixed_point_residual(params, result.limit);
  report.converged = report.sup_diffs.back() <= options.tol &&
                     report.residual <= residual_tolerance(options.tol);
  return result;
}

PredictionPath solve_fixed_point(const ModelParams& params, double p0, double t_end,
                                 int n_steps) {
  require_ratio(p0, "p0");
  check_grid(t_end, n_steps);
  const double h = t_end / n_steps;
  std::vector<double> out(static_cast<std::size_t>(n_steps) + 1);
  double x = p0;
  out[0] = x;
  for (int k = 0; k < n_steps; ++k) {
    const double k1 = drift_unchecked(params, x);
    const double k2 = drift_unchecked(params, x + 0.5 * h * k1);
    const double k3 = drift_unchecked(params, x + 0.5 * h * k2);
    const double k4 = drift_unchecked(params, x + h * k3);
    x = clamp_step(x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), t_end * (k + 1) / n_steps);
    out[static_cast<std::size_t>(k) + 1] = x;
  }
  return PredictionPath(t_end, std::move(out));
}

double fixed_point_residual(const ModelParams& params, const PredictionPath& path) {
  const int n = path.n_steps();
  const double h = path.step();
  double sup = 0.0;
  if (n >= 4) {
    for (int k = 2; k <= n - 2; ++k) {
      const double dx =
          (-path[k + 2] + 8.0 * path[k + 1] - 8.0 * path[k - 1] + path[k - 2]) / (12.0 * h);
      sup = std::max(sup, std::abs(dx - drift_unchecked(params, path[k])));
    }
  } else {
    for (int k = 1; k <= n - 1; ++k) {
      const double dx = (path[k + 1] - path[k - 1]) / (2.0 * h);
      sup = std::max(sup, std::abs(dx - drift_unchecked(params, path[k])));
    }
  }
  return sup;
}

std::vector<Equilibrium> find_equilibria(const ModelParams& params, int grid_resolution) {
  if (grid_resolution < 100) throw std::invalid_argument("grid_resolution must be >= 100");
  if (params.alpha() == 0.0 && params.beta() == 0.0) return {};

  constexpr double kProbe = 1e-6;
  const auto f = [&params](double x) { return drift_unchecked(params, x); };
  const auto classify = [&](double root) {
    const bool in_from_left = root - kProbe < 0.0 || f(root - kProbe) > 0.0;
    const bool in_from_right = root + kProbe > 1.0 || f(root + kProbe) < 0.0;
    return in_from_left && in_from_right ? Stability::stable : Stability::unstable;
  };

  std::vector<Equilibrium> roots;
  const auto push = [&](double root) {
    if (!roots.empty() && std::abs(roots.back().ratio - root) < 1e-9) return;
    roots.push_back({root, classify(root)});
  };

  double left = 0.0;
  double f_left = f(left);
  if (f_left == 0.0) push(left);
  for (int i = 1; i <= grid_resolution; ++i) {
    const double right = static_cast<double>(i) / grid_resolution;
    const double f_right = f(right);
    if (f_right == 0.0) {
      if (f_left != 0.0) push(right);
    } else if (f_left != 0.0 && (f_left < 0.0) != (f_right < 0.0)) {
      double lo = left;
      double hi = right;
      const bool lo_negative = f_left < 0.0;
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0.0) == lo_negative) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      push(0.5 * (lo + hi));
    }
    left = right;
    f_left = f_right;
  }
  return roots;
}

GronwallConstant gronwall_constant(const ModelParams& params, double t_end) {
  // g is monotone, so max |g| on [0, 1] sits at an endpoint.
  const double max_abs_g = std::max(std::abs(gain(params, 0.0)), std::abs(gain(params, 1.0)));
  GronwallConstant out;
  out.l1 = 2.0 * params.beta() + params.alpha() * max_abs_g;
  out.l2 = 2.0 * params.alpha() * g_lipschitz_constant(params);
  out.log_l = out.l2 > 0.0 ? std::log(out.l2) + out.l1 * t_end
                           : -std::numeric_limits<double>::infinity();
  out.l = std::exp(out.log_l);
  return out;
}

double log_convergence_bound(const GronwallConstant& constant, double t_end, int n) {
  if (n == 0) return 0.0;
  return n * (constant.log_l + std::log(t_end)) - std::lgamma(n + 1.0);
}

}  // namespace swarmlob
