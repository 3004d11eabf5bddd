#include "swarmlob/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "swarmlob/config.hpp"
#include "swarmlob/io.hpp"

namespace swarmlob::cli {

namespace {

const std::vector<std::pair<std::string, std::string>> kCommands = {
    {"analytic", "closed-form waits, rewards, g-value and critical ratio"},
    {"picard", "iterate predictions to the swarm limit"},
    {"fixed-point", "integrate the mean-field ODE directly"},
    {"equilibria", "roots of the drift on [0, 1] with stability"},
    {"queue-sim", "discrete-event simulation of the two-class order book"},
    {"agent-sim", "finite-population agent simulation"},
    {"g-contour", "g(p, c) on a grid"},
    {"drift-field", "time-zero drift on a (p0, beta) grid"},
    {"beta-sweep", "mean-field trajectories for a list of beta values"},
};

struct Outcome {
  io::Document doc;
  std::string summary;
  int status = kOk;
};

std::string short_num(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::string regime_name(CriticalRatio::Regime r) {
  switch (r) {
    case CriticalRatio::Regime::interior: return "interior";
    case CriticalRatio::Regime::none_below: return "none-below";
    case CriticalRatio::Regime::none_above: return "none-above";
  }
  return "?";
}

nlohmann::json grid_json(const GridSpec& g) {
  return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"x_count", g.x_count},
          {"y_min", g.y_min}, {"y_max", g.y_max}, {"y_count", g.y_count}};
}

Outcome run_analytic(const RunConfig& cfg, const ModelParams& params) {
  const double p = cfg.p0;
  const auto pe = critical_ratio(params);
  io::Table t{"analytic", {"quantity", "value"}, {}};
  const auto row = [&t](const char* name, io::Cell v) { t.rows.push_back({name, std::move(v)}); };
  row("lambda", params.lambda());
  row("mu", params.mu());
  row("rho", params.rho());
  row("delta_theta", params.delta_theta());
  row("p", p);
  row("expected_wait_1", expected_wait_priority(params, p));
  row("expected_wait_2", expected_wait_low(params, p));
  row("workload_residual", workload_conservation_residual(params, p));
  row("expected_reward_1", expected_reward(params, p, PriceClass::lower));
  row("expected_reward_2", expected_reward(params, p, PriceClass::higher));
  row("g", g_value(params, p));
  row("critical_ratio", pe.value);
  row("critical_regime", regime_name(pe.regime));
  row("g_lipschitz", g_lipschitz_constant(params));

  std::string summary = "analytic: p_e=";
  summary += pe.interior() ? short_num(pe.value) : regime_name(pe.regime);
  summary += " E[W1]=" + short_num(expected_wait_priority(params, p)) +
             " E[W2]=" + short_num(expected_wait_low(params, p)) +
             " g(p0)=" + short_num(g_value(params, p));
  return {{{}, {std::move(t)}}, summary, kOk};
}

Outcome run_picard(const RunConfig& cfg, const ModelParams& params) {
  const auto kind = parse_initial_prediction(cfg.init);
  const auto x0 = initial_prediction(kind, cfg.p0, cfg.t_end, cfg.n_steps);
  PicardOptions opts;
  opts.tol = cfg.tol;
  opts.max_iters = cfg.max_iters;
  opts.keep_iterates = true;
  auto result = picard_iterate(params, x0, cfg.p0, opts);

  std::vector<PredictionPath> series;
  series.reserve(result.iterates.size() + 1);
  series.push_back(x0);
  for (auto& it : result.iterates) series.push_back(std::move(it));

  const auto& rep = result.report;
  std::string summary = std::string("picard: ") + (rep.converged ? "converged" : "NOT converged") +
                        " after " + std::to_string(rep.n_iters) + " iterations (sup_diff=" +
                        short_num(rep.sup_diffs.back()) + ", residual=" +
                        short_num(rep.residual) + ")";
  io::Document doc;
  doc.meta["converged"] = rep.converged;
  doc.meta["n_iters"] = rep.n_iters;
  doc.meta["residual"] = rep.residual;
  doc.tables.push_back(io::paths_table(series));
  doc.tables.push_back(io::report_table(rep));
  return {std::move(doc), summary, rep.converged ? kOk : kNotConverged};
}

Outcome run_fixed_point(const RunConfig& cfg, const ModelParams& params) {
  const auto path = solve_fixed_point(params, cfg.p0, cfg.t_end, cfg.n_steps);
  const double residual = fixed_point_residual(params, path);
  io::Document doc;
  doc.meta["residual"] = residual;
  doc.tables.push_back(io::paths_table(std::span(&path, 1)));
  return {std::move(doc),
          "fixed-point: x(T)=" + short_num(path[path.n_steps()]) +
              " residual=" + short_num(residual),
          kOk};
}

Outcome run_equilibria(const RunConfig& cfg, const ModelParams& params) {
  const auto eq = find_equilibria(params, cfg.grid_resolution);
  std::string summary = "equilibria:";
  if (eq.empty()) summary += " none isolated";
  for (const auto& e : eq) {
    summary += " " + short_num(e.ratio) + (e.stability == Stability::stable ? "(stable)"
                                                                            : "(unstable)");
  }
  return {{{}, {io::equilibria_table(eq)}}, summary, kOk};
}

Outcome run_queue_sim(const RunConfig& cfg, const ModelParams& params, unsigned threads) {
  QueueSimConfig qc;
  qc.params = params;
  qc.p = cfg.p0;
  qc.n_orders = cfg.n_orders;
  qc.warmup_orders = cfg.warmup;
  const auto pooled = replicate_priority_queue(
      qc, static_cast<std::size_t>(cfg.replications), cfg.seed, threads);
  io::Document doc;
  doc.meta["expected_wait_1"] = expected_wait_priority(params, cfg.p0);
  doc.meta["expected_wait_2"] = expected_wait_low(params, cfg.p0);
  doc.meta["workload_mean"] = pooled.workload.mean;
  doc.meta["workload_se"] = pooled.workload.se;
  doc.tables.push_back(io::queue_table(pooled));
  doc.tables.push_back(io::queue_runs_table(pooled));
  const auto& first = doc.tables.front().rows;
  const double w1 = std::get<double>(first[0][1]);
  const double w2 = std::get<double>(first[1][1]);
  return {std::move(doc),
          "queue-sim: mean W1=" + short_num(w1) + " (closed form " +
              short_num(expected_wait_priority(params, cfg.p0)) + "), mean W2=" +
              short_num(w2) + " (closed form " + short_num(expected_wait_low(params, cfg.p0)) +
              ") over " + std::to_string(cfg.replications) + " replication(s)",
          kOk};
}

Outcome run_agent_sim(const RunConfig& cfg, const ModelParams& params, unsigned threads) {
  AgentSimConfig ac;
  ac.params = params;
  ac.n_agents = cfg.n_agents;
  ac.p0 = cfg.p0;
  ac.t_end = cfg.t_end;
  ac.validate();
  const auto paths = replicate(
      [&ac](std::uint64_t seed) {
        AgentSimConfig c = ac;
        c.seed = seed;
        return simulate_agents(c);
      },
      static_cast<std::size_t>(cfg.replications), cfg.seed, threads);
  const auto mean_field = solve_fixed_point(params, cfg.p0, cfg.t_end, cfg.n_steps);
  std::vector<double> gaps;
  for (const auto& p : paths) gaps.push_back(sup_distance(p, mean_field));
  const auto gap = summarize(gaps);

  io::Document doc;
  doc.meta["sup_distance_mean"] = gap.mean;
  doc.meta["sup_distance_se"] = gap.se;
  doc.meta["sup_distance"] = gaps;
  doc.tables.push_back(io::agent_paths_table(paths));
  auto mf = io::paths_table(std::span(&mean_field, 1));
  mf.name = "mean_field";
  doc.tables.push_back(std::move(mf));
  return {std::move(doc),
          "agent-sim: N=" + std::to_string(cfg.n_agents) + " mean sup|p_hat - x|=" +
              short_num(gap.mean) + " over " + std::to_string(cfg.replications) +
              " replication(s)",
          kOk};
}

Outcome run_field(const RunConfig& cfg, const ModelParams& params, bool contour) {
  const auto spec = resolve_grid(cfg, contour ? default_g_contour_spec()
                                              : default_drift_field_spec());
  const auto grid = contour ? g_contour_grid(params, spec) : drift_field_grid(params, spec);
  double lo = grid.values.front();
  double hi = lo;
  for (double v : grid.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  io::Document doc;
  doc.meta["grid"] = grid_json(spec);
  doc.tables.push_back(io::field_table(grid));
  return {std::move(doc),
          cfg.command + ": " + std::to_string(spec.x_count) + "x" +
              std::to_string(spec.y_count) + " grid, range [" + short_num(lo) + ", " +
              short_num(hi) + "]",
          kOk};
}

Outcome run_beta_sweep(const RunConfig& cfg, const ModelParams& params) {
  const auto paths = beta_sweep_limits(params, cfg.p0, cfg.betas, cfg.t_end, cfg.n_steps);
  io::Table betas{"betas", {"series", "beta"}, {}};
  std::string summary = "beta-sweep: x(T) =";
  for (std::size_t i = 0; i < paths.size(); ++i) {
    betas.rows.push_back({static_cast<std::int64_t>(i), cfg.betas[i]});
    summary += " " + short_num(paths[i][paths[i].n_steps()]);
  }
  io::Document doc;
  doc.tables.push_back(io::paths_table(paths));
  doc.tables.push_back(std::move(betas));
  return {std::move(doc), summary, kOk};
}

Outcome dispatch(const RunConfig& cfg, const ModelParams& params, unsigned threads) {
  const auto& c = cfg.command;
  if (c == "analytic") return run_analytic(cfg, params);
  if (c == "picard") return run_picard(cfg, params);
  if (c == "fixed-point") return run_fixed_point(cfg, params);
  if (c == "equilibria") return run_equilibria(cfg, params);
  if (c == "queue-sim") return run_queue_sim(cfg, params, threads);
  if (c == "agent-sim") return run_agent_sim(cfg, params, threads);
  if (c == "g-contour") return run_field(cfg, params, true);
  if (c == "drift-field") return run_field(cfg, params, false);
  if (c == "beta-sweep") return run_beta_sweep(cfg, params);
  throw ParamError("command", "unknown subcommand '" + c + "'");
}

std::filesystem::path default_output(const RunConfig& cfg) {
  const char* dir = std::getenv(kOutputDirEnv);
  std::filesystem::path base = (dir && *dir) ? dir : ".";
  return base / (cfg.command + "." + cfg.format);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string out_path;
  unsigned threads = 0;

  CLI::App app{"Mean-field swarm dynamics on a two-price limit order book", "swarmlob"};
  app.set_config("--config", "", "flat key = value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  for (const auto& [name, help] : kCommands) app.add_subcommand(name, help)->fallthrough();

  auto* lambda = app.add_option("--lambda", cfg.lambda, "sell-order arrival rate");
  auto* rho = app.add_option("--rho", cfg.rho, "lambda / mu (default 0.9)");
  lambda->excludes(rho);
  app.add_option("--mu", cfg.mu, "buy-order arrival rate");
  app.add_option("--theta1", cfg.theta1, "lower price");
  auto* theta2 = app.add_option("--theta2", cfg.theta2, "higher price");
  auto* dtheta = app.add_option("--delta-theta,--delta_theta", cfg.delta_theta,
                                "theta2 - theta1 (default 1)");
  theta2->excludes(dtheta);
  app.add_option("--c", cfg.c, "waiting cost per unit time");
  app.add_option("--alpha", cfg.alpha, "gain sensitivity of switching");
  app.add_option("--beta", cfg.beta, "zero-intelligence switching rate");

  app.add_option("--p0", cfg.p0, "current theta1 ratio (also the queue-sim class-1 share)");
  app.add_option("--t-end,--t_end", cfg.t_end, "horizon T");
  app.add_option("--n-steps,--n_steps", cfg.n_steps, "grid steps on [0, T]");
  app.add_option("--tol", cfg.tol, "sup-norm stopping tolerance");
  app.add_option("--max-iters,--max_iters", cfg.max_iters, "iteration cap");
  app.add_option("--init", cfg.init, "initial prediction: decreasing | oscillating | static");

  app.add_option("--n-agents,--n_agents", cfg.n_agents, "agent population N");
  app.add_option("--n-orders,--n_orders", cfg.n_orders, "sell orders per queue run");
  app.add_option("--warmup", cfg.warmup, "sell orders discarded before measuring");
  app.add_option("--seed", cfg.seed, "base seed");
  app.add_option("--replications", cfg.replications, "independent replications");
  app.add_option("--threads", threads, "worker threads for replications (0 = all cores)");

  app.add_option("--x-min,--x_min", cfg.x_min);
  app.add_option("--x-max,--x_max", cfg.x_max);
  app.add_option("--x-count,--x_count", cfg.x_count);
  app.add_option("--y-min,--y_min", cfg.y_min);
  app.add_option("--y-max,--y_max", cfg.y_max);
  app.add_option("--y-count,--y_count", cfg.y_count);
  app.add_option("--betas", cfg.betas, "comma-separated beta list")->delimiter(',');
  app.add_option("--grid-resolution,--grid_resolution", cfg.grid_resolution);

  app.add_option("--out", out_path,
                 "output file (default $SWARMLOB_OUTPUT_DIR/<command>.<format>)");
  app.add_option("--format", cfg.format, "csv | json");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    validate_settings(cfg);
    const auto params = resolve_params(cfg);
    Outcome outcome = dispatch(cfg, params, threads);

    auto& meta = outcome.doc.meta;
    meta["command"] = cfg.command;
    meta["config"] = to_json(cfg);
    meta["params"] = to_json(params);
    meta["seed"] = cfg.seed;

    const auto target =
        out_path.empty() ? default_output(cfg) : std::filesystem::path(out_path);
    const auto written = io::write_document(outcome.doc, target, io::parse_format(cfg.format));
    out << outcome.summary << " -> " << written.front().string() << "\n";
    return outcome.status;
  } catch (const ParamError& e) {
    err << "error: invalid " << e.what() << "\n";
  } catch (const io::IoError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kUsageError;
}

}  // namespace swarmlob::cli
