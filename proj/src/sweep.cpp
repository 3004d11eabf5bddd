#include "swarmlob/sweep.hpp"

#include <cmath>
#include <stdexcept>

namespace swarmlob {

namespace {

template <class F>
FieldGrid fill(const GridSpec& spec, F&& f) {
  FieldGrid grid{spec, {}};
  grid.values.reserve(static_cast<std::size_t>(spec.x_count) *
                      static_cast<std::size_t>(spec.y_count));
  for (int j = 0; j < spec.y_count; ++j) {
    for (int i = 0; i < spec.x_count; ++i) grid.values.push_back(f(spec.x(i), spec.y(j)));
  }
  return grid;
}

void require_unit_axis(double lo, double hi, const char* field) {
  if (lo < 0.0 || hi > 1.0) throw ParamError(field, "axis must lie within [0, 1]");
}

void require_nonnegative_axis(double lo, const char* field) {
  if (lo < 0.0) throw ParamError(field, "axis must be >= 0");
}

}  // namespace

void GridSpec::validate() const {
  if (x_count < 2) throw ParamError("x_count", "must be >= 2");
  if (y_count < 2) throw ParamError("y_count", "must be >= 2");
  if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw ParamError("x_min", "x_min must be < x_max");
  }
  if (!(y_min < y_max) || !std::isfinite(y_min) || !std::isfinite(y_max)) {
    throw ParamError("y_min", "y_min must be < y_max");
  }
}

// The last node is pinned to the upper bound so it is hit exactly.
double GridSpec::x(int i) const noexcept {
  return i == x_count - 1 ? x_max : x_min + (x_max - x_min) * i / (x_count - 1);
}

double GridSpec::y(int j) const noexcept {
  return j == y_count - 1 ? y_max : y_min + (y_max - y_min) * j / (y_count - 1);
}

FieldGrid g_contour_grid(const ModelParams& params, const GridSpec& spec) {
  spec.validate();
  require_unit_axis(spec.x_min, spec.x_max, "p");
  require_nonnegative_axis(spec.y_min, "c");
  return fill(spec, [&params](double p, double c) { return g_value(params.with_c(c), p); });
}

GridSpec default_g_contour_spec() { return {0.0, 1.0, 201, 0.0, 0.06, 201}; }

FieldGrid drift_field_grid(const ModelParams& params, const GridSpec& spec) {
  spec.validate();
  require_unit_axis(spec.x_min, spec.x_max, "p0");
  require_nonnegative_axis(spec.y_min, "beta");
  return fill(spec,
              [&params](double p0, double beta) { return drift(params.with_beta(beta), p0); });
}

GridSpec default_drift_field_spec() { return {0.0, 1.0, 201, 0.0, 0.3, 201}; }

std::vector<PredictionPath> beta_sweep_limits(const ModelParams& params, double p0,
                                              std::span<const double> betas, double t_end,
                                              int n_steps) {
  std::vector<PredictionPath> paths;
  paths.reserve(betas.size());
  for (double beta : betas) {
    paths.push_back(solve_fixed_point(params.with_beta(beta), p0, t_end, n_steps));
  }
  return paths;
}

std::vector<double> default_beta_list() { return {0.0, 0.05, 0.1, 0.15, 0.2, 0.25}; }

}  // namespace swarmlob
