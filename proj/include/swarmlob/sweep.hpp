#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "swarmlob/dynamics.hpp"
#include "swarmlob/model.hpp"

namespace swarmlob {

// Two inclusive uniform axes. Node (i, j) sits at x_i = x_min + i dx,
// y_j = y_min + j dy.
struct GridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  int x_count = 201;
  double y_min = 0.0;
  double y_max = 1.0;
  int y_count = 201;

  void validate() const;
  double x(int i) const noexcept;
  double y(int j) const noexcept;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Row-major field: values[j * x_count + i] holds the value at (x_i, y_j).
struct FieldGrid {
  GridSpec spec;
  std::vector<double> values;

  double at(int i, int j) const noexcept {
    return values[static_cast<std::size_t>(j) * static_cast<std::size_t>(spec.x_count) +
                  static_cast<std::size_t>(i)];
  }
};

// g(p, c) with p on the x-axis and c on the y-axis; `params` supplies
// everything except c. Defaults cover p in [0, 1], c in [0, 0.06].
FieldGrid g_contour_grid(const ModelParams& params, const GridSpec& spec);
GridSpec default_g_contour_spec();

// Drift at time zero with p0 on the x-axis and beta on the y-axis; `params`
// supplies everything except beta. Defaults cover p0 in [0, 1], beta in [0, 0.3].
FieldGrid drift_field_grid(const ModelParams& params, const GridSpec& spec);
GridSpec default_drift_field_spec();

// Mean-field trajectories from p0, one per beta.
std::vector<PredictionPath> beta_sweep_limits(const ModelParams& params, double p0,
                                              std::span<const double> betas,
                                              double t_end = 10.0, int n_steps = 2000);

std::vector<double> default_beta_list();

}  // namespace swarmlob
