#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmlob/dynamics.hpp"
#include "swarmlob/model.hpp"
#include "swarmlob/stochastic.hpp"
#include "swarmlob/sweep.hpp"

namespace swarmlob {

// Everything a CLI run depends on. Market inputs come in two alternative
// spellings (lambda or rho, theta2 or delta_theta); at most one of each pair
// may be set, and when neither is set the reference market is used.
struct RunConfig {
  std::string command;

  std::optional<double> lambda;
  std::optional<double> rho;
  double mu = 1.0;
  double theta1 = 0.0;
  std::optional<double> theta2;
  std::optional<double> delta_theta;
  double c = 0.03;
  double alpha = 5.0;
  double beta = 0.1;

  double p0 = 0.9;
  double t_end = 10.0;
  int n_steps = 2000;
  double tol = 1e-8;
  int max_iters = 200;
  std::string init = "static";

  int n_agents = 10'000;
  std::uint64_t n_orders = 1'000'000;
  std::uint64_t warmup = 100'000;
  std::uint64_t seed = 1;
  int replications = 1;

  std::optional<double> x_min;
  std::optional<double> x_max;
  std::optional<int> x_count;
  std::optional<double> y_min;
  std::optional<double> y_max;
  std::optional<int> y_count;
  std::vector<double> betas = default_beta_list();
  int grid_resolution = 1000;

  std::string format = "csv";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Validates the market inputs and builds the parameter set.
ModelParams resolve_params(const RunConfig& config);

// Axis overrides applied on top of `fallback`.
GridSpec resolve_grid(const RunConfig& config, const GridSpec& fallback);

// Field-level checks of the non-market settings; throws ParamError.
void validate_settings(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ModelParams& params);

}  // namespace swarmlob
