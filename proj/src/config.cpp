#include "swarmlob/config.hpp"

#include <cmath>

namespace swarmlob {

namespace {

template <class T>
void put(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  if (v) {
    j[key] = *v;
  } else {
    j[key] = nullptr;
  }
}

template <class T>
void get(const nlohmann::json& j, const char* key, std::optional<T>& v) {
  if (!j.contains(key) || j.at(key).is_null()) {
    v.reset();
  } else {
    v = j.at(key).get<T>();
  }
}

template <class T>
void get(const nlohmann::json& j, const char* key, T& v) {
  if (j.contains(key)) v = j.at(key).get<T>();
}

}  // namespace

ModelParams resolve_params(const RunConfig& config) {
  if (config.lambda && config.rho) throw ParamError("rho", "give only one of lambda and rho");
  if (config.theta2 && config.delta_theta) {
    throw ParamError("delta_theta", "give only one of theta2 and delta_theta");
  }
  if (!(config.mu > 0.0) || !std::isfinite(config.mu)) throw ParamError("mu", "must be > 0");

  ParamSet raw;
  raw.mu = config.mu;
  if (config.lambda) {
    raw.lambda = *config.lambda;
  } else {
    const double rho = config.rho.value_or(0.9);
    if (!(rho > 0.0 && rho < 1.0)) throw ParamError("rho", "must satisfy 0 < rho < 1");
    raw.lambda = rho * config.mu;
  }
  raw.theta1 = config.theta1;
  if (config.theta2) {
    raw.theta2 = *config.theta2;
  } else {
    const double dtheta = config.delta_theta.value_or(1.0);
    if (!(dtheta > 0.0)) throw ParamError("delta_theta", "must be > 0");
    raw.theta2 = config.theta1 + dtheta;
  }
  raw.c = config.c;
  raw.alpha = config.alpha;
  raw.beta = config.beta;
  return ModelParams(raw);
}

GridSpec resolve_grid(const RunConfig& config, const GridSpec& fallback) {
  GridSpec g = fallback;
  if (config.x_min) g.x_min = *config.x_min;
  if (config.x_max) g.x_max = *config.x_max;
  if (config.x_count) g.x_count = *config.x_count;
  if (config.y_min) g.y_min = *config.y_min;
  if (config.y_max) g.y_max = *config.y_max;
  if (config.y_count) g.y_count = *config.y_count;
  g.validate();
  return g;
}

void validate_settings(const RunConfig& config) {
  if (!(config.p0 >= 0.0 && config.p0 <= 1.0)) throw ParamError("p0", "must lie in [0, 1]");
  if (!(config.t_end > 0.0) || !std::isfinite(config.t_end)) {
    throw ParamError("t_end", "must be > 0");
  }
  if (config.n_steps < 2) throw ParamError("n_steps", "must be >= 2");
  if (!(config.tol > 0.0)) throw ParamError("tol", "must be > 0");
  if (config.max_iters < 1) throw ParamError("max_iters", "must be >= 1");
  try {
    parse_initial_prediction(config.init);
  } catch (const std::invalid_argument& e) {
    throw ParamError("init", e.what());
  }
  if (config.n_agents < 1) throw ParamError("n_agents", "must be >= 1");
  if (!(config.n_orders > config.warmup)) throw ParamError("n_orders", "must exceed warmup");
  if (config.replications < 1) throw ParamError("replications", "must be >= 1");
  for (double b : config.betas) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw ParamError("betas", "every beta must be >= 0");
  }
  if (config.grid_resolution < 100) throw ParamError("grid_resolution", "must be >= 100");
  if (config.format != "csv" && config.format != "json") {
    throw ParamError("format", "must be csv or json");
  }
}

nlohmann::json to_json(const RunConfig& config) {
  nlohmann::json j;
  j["command"] = config.command;
  put(j, "lambda", config.lambda);
  put(j, "rho", config.rho);
  j["mu"] = config.mu;
  j["theta1"] = config.theta1;
  put(j, "theta2", config.theta2);
  put(j, "delta_theta", config.delta_theta);
  j["c"] = config.c;
  j["alpha"] = config.alpha;
  j["beta"] = config.beta;
  j["p0"] = config.p0;
  j["t_end"] = config.t_end;
  j["n_steps"] = config.n_steps;
  j["tol"] = config.tol;
  j["max_iters"] = config.max_iters;
  j["init"] = config.init;
  j["n_agents"] = config.n_agents;
  j["n_orders"] = config.n_orders;
  j["warmup"] = config.warmup;
  j["seed"] = config.seed;
  j["replications"] = config.replications;
  put(j, "x_min", config.x_min);
  put(j, "x_max", config.x_max);
  put(j, "x_count", config.x_count);
  put(j, "y_min", config.y_min);
  put(j, "y_max", config.y_max);
  put(j, "y_count", config.y_count);
  j["betas"] = config.betas;
  j["grid_resolution"] = config.grid_resolution;
  j["format"] = config.format;
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  get(j, "command", c.command);
  get(j, "lambda", c.lambda);
  get(j, "rho", c.rho);
  get(j, "mu", c.mu);
  get(j, "theta1", c.theta1);
  get(j, "theta2", c.theta2);
  get(j, "delta_theta", c.delta_theta);
  get(j, "c", c.c);
  get(j, "alpha", c.alpha);
  get(j, "beta", c.beta);
  get(j, "p0", c.p0);
  get(j, "t_end", c.t_end);
  get(j, "n_steps", c.n_steps);
  get(j, "tol", c.tol);
  get(j, "max_iters", c.max_iters);
  get(j, "init", c.init);
  get(j, "n_agents", c.n_agents);
  get(j, "n_orders", c.n_orders);
  get(j, "warmup", c.warmup);
  get(j, "seed", c.seed);
  get(j, "replications", c.replications);
  get(j, "x_min", c.x_min);
  get(j, "x_max", c.x_max);
  get(j, "x_count", c.x_count);
  get(j, "y_min", c.y_min);
  get(j, "y_max", c.y_max);
  get(j, "y_count", c.y_count);
  get(j, "betas", c.betas);
  get(j, "grid_resolution", c.grid_resolution);
  get(j, "format", c.format);
  return c;
}

nlohmann::json to_json(const ModelParams& params) {
  return {{"lambda", params.lambda()},   {"mu", params.mu()},
          {"rho", params.rho()},         {"theta1", params.theta1()},
          {"theta2", params.theta2()},   {"delta_theta", params.delta_theta()},
          {"c", params.c()},             {"alpha", params.alpha()},
          {"beta", params.beta()}};
}

}  // namespace swarmlob
