#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmlob/model.hpp"

namespace swarmlob {

// Switching intensities of a single trader given the market ratio p:
// alpha1 moves theta1 -> theta2, alpha2 moves theta2 -> theta1.
struct TransitionRates {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};

// Coefficients of the linear form dx/dt = a x + b with a = -(alpha1 + alpha2)
// and b = alpha2.
struct AffineCoefficients {
  double a = 0.0;
  double b = 0.0;
};

// A step overshot [0, 1] by more than the clamp tolerance.
class IntegrationFault : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kClampTolerance = 1e-9;

// Market-ratio trajectory sampled at t_k = k * t_end / n_steps, k = 0..n_steps.
class PredictionPath {
public:
  // values.size() - 1 becomes n_steps. Every value must lie in [0, 1].
  PredictionPath(double t_end, std::vector<double> values);

  template <class F>
  static PredictionPath sample(double t_end, int n_steps, F&& f) {
    if (n_steps < 2) throw std::invalid_argument("n_steps must be >= 2");
    std::vector<double> v(static_cast<std::size_t>(n_steps) + 1);
    for (int k = 0; k <= n_steps; ++k) {
      v[static_cast<std::size_t>(k)] = f(k, t_end * k / n_steps);
    }
    return PredictionPath(t_end, std::move(v));
  }

  static PredictionPath constant(double t_end, int n_steps, double value);

  double t_end() const noexcept { return t_end_; }
  int n_steps() const noexcept { return static_cast<int>(values_.size()) - 1; }
  double step() const noexcept { return t_end_ / n_steps(); }
  double time(int k) const noexcept { return t_end_ * k / n_steps(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](int k) const noexcept { return values_[static_cast<std::size_t>(k)]; }

  // Value halfway between nodes k and k+1: cubic Lagrange interpolation
  // through four neighbouring nodes, clamped to [0, 1].
  double midpoint(int k) const noexcept;

  bool same_grid(const PredictionPath& other) const noexcept {
    return n_steps() == other.n_steps() && t_end_ == other.t_end_;
  }

  friend bool operator==(const PredictionPath&, const PredictionPath&) = default;

private:
  double t_end_;
  std::vector<double> values_;
};

double sup_distance(const PredictionPath& a, const PredictionPath& b);

enum class InitialPrediction { decreasing, oscillating, constant };

// Initial subjective predictions:
//   decreasing  x(t) = p0 exp(-t)
//   oscillating 0/1 alternating on six equal subintervals, starting at 0
//               (right-continuous at the jump nodes)
//   constant    x(t) = p0
PredictionPath initial_prediction(InitialPrediction kind, double p0, double t_end, int n_steps);

InitialPrediction parse_initial_prediction(const std::string& name);
std::string to_string(InitialPrediction kind);

TransitionRates rates_at(const ModelParams& params, double p);
AffineCoefficients affine_coefficients(const ModelParams& params, double p);

// Right-hand side of the master equation at the mean-field fixed point:
// -alpha1(x) x + alpha2(x) (1 - x).
double drift(const ModelParams& params, double x);

// Integrates dx/dt = a(d(t)) x + b(d(t)), x(0) = p0, where d is the frozen
// driving path. Classical RK4 on the driving path's grid.
PredictionPath solve_linear_step(const ModelParams& params, const PredictionPath& driving,
                                 double p0);

struct IterationReport {
  std::vector<double> sup_diffs;  // sup_diffs[n-1] = ||x_n - x_{n-1}||_inf
  int n_iters = 0;
  bool converged = false;
  double residual = 0.0;  // sup-norm fixed-point ODE residual of the final path
};

struct PicardOptions {
  double tol = 1e-8;
  int max_iters = 200;
  bool keep_iterates = false;
};

struct PicardResult {
  PredictionPath limit;
  IterationReport report;
  std::vector<PredictionPath> iterates;  // x_1..x_n when keep_iterates is set
};

double residual_tolerance(double tol);

// Runs x_n = solve_linear_step(x_{n-1}) from x0 until the sup-norm update is
// at most tol or max_iters is reached. Non-convergence is reported, not thrown.
PicardResult picard_iterate(const ModelParams& params, const PredictionPath& x0, double p0,
                            const PicardOptions& options = {});

// RK4 on dx/dt = drift(x), x(0) = p0.
PredictionPath solve_fixed_point(const ModelParams& params, double p0, double t_end = 10.0,
                                 int n_steps = 2000);

// Sup over grid nodes of |dx/dt - drift(x)|, with dx/dt from the five-point
// centered stencil on nodes 2..n-2 (three-point when the grid is too short).
double fixed_point_residual(const ModelParams& params, const PredictionPath& path);

enum class Stability { stable, unstable };

struct Equilibrium {
  double ratio;
  Stability stability;
};

// Zeros of the drift on [0, 1]. Interior roots are bracketed on a uniform
// grid and bisected to 1e-10; endpoints are reported when the drift vanishes
// there. Stability is read off the drift sign at root +/- 1e-6. Returns an
// empty list when the drift vanishes identically (alpha = beta = 0).
std::vector<Equilibrium> find_equilibria(const ModelParams& params, int grid_resolution = 1000);

// Constants of the Gronwall argument:
//   L1 = sup |a| = 2 beta + alpha max|g|,  L2 = Lip(a) + Lip(b) = 2 alpha Lg,
//   L  = L2 exp(L1 T).
// L overflows easily, so its logarithm is carried alongside.
struct GronwallConstant {
  double l1 = 0.0;
  double l2 = 0.0;
  double l = 0.0;
  double log_l = 0.0;
};

GronwallConstant gronwall_constant(const ModelParams& params, double t_end);

// log((L T)^n / n!); -inf when L == 0 and n > 0.
double log_convergence_bound(const GronwallConstant& constant, double t_end, int n);

}  // namespace swarmlob
