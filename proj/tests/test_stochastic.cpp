#include <doctest.h>

#include <cmath>

#include "swarmlob/stochastic.hpp"

using namespace swarmlob;

namespace {

QueueSimConfig queue(double lambda, double p, std::uint64_t n, std::uint64_t warmup,
                     std::uint64_t seed = 42) {
  QueueSimConfig c;
  c.params = ModelParams(ParamSet{lambda, 1.0, 0.0, 1.0, 0.03, 5.0, 0.1});
  c.p = p;
  c.n_orders = n;
  c.warmup_orders = warmup;
  c.seed = seed;
  return c;
}

AgentSimConfig agents(const ModelParams& params, int n, double p0, double t_end,
                      std::uint64_t seed) {
  AgentSimConfig c;
  c.params = params;
  c.n_agents = n;
  c.p0 = p0;
  c.t_end = t_end;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("seed derivation") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(123, 4) == splitmix64(123 + 5 * 0x9E3779B97F4A7C15ull));
}

TEST_CASE("queue config validation") {
  CHECK_THROWS_AS(simulate_priority_queue(queue(0.9, 0.9, 100, 100)), ParamError);
  CHECK_THROWS_AS(simulate_priority_queue(queue(0.9, 1.5, 1000, 100)), std::domain_error);
}

TEST_CASE("priority queue matches the closed forms in heavy traffic") {
  const auto cfg = queue(0.9, 0.9, 1'000'000, 100'000);
  const auto s = simulate_priority_queue(cfg);
  CHECK(s.n_1 + s.n_2 == 900'000);
  CHECK(std::abs(s.mean_wait_1 / expected_wait_priority(cfg.params, 0.9) - 1.0) < 0.05);
  CHECK(std::abs(s.mean_wait_2 / expected_wait_low(cfg.params, 0.9) - 1.0) < 0.10);
  CHECK(s.mean_wait_1 <= s.mean_wait_2);
  CHECK(s.sem_1 > 0.0);
  CHECK(s.sem_2 > 0.0);
}

TEST_CASE("light traffic: waits approach one buy interarrival") {
  const auto s = simulate_priority_queue(queue(0.01, 0.5, 200'000, 10'000));
  CHECK(std::abs(s.mean_wait_1 - 1.0) < 0.05);
  CHECK(std::abs(s.mean_wait_2 - 1.0) < 0.05);
  CHECK(s.discarded_buys > 0);
}

TEST_CASE("single class reduces to M/M/1") {
  const auto s = simulate_priority_queue(queue(0.5, 1.0, 500'000, 50'000));
  CHECK(std::abs(s.mean_wait_1 - 2.0) < 0.05 * 2.0);
  CHECK(s.n_2 == 0);
  CHECK(s.mean_wait_2 == 0.0);
}

TEST_CASE("queue simulation is deterministic per seed") {
  const auto a = simulate_priority_queue(queue(0.9, 0.9, 50'000, 5'000, 9));
  const auto b = simulate_priority_queue(queue(0.9, 0.9, 50'000, 5'000, 9));
  const auto c = simulate_priority_queue(queue(0.9, 0.9, 50'000, 5'000, 10));
  CHECK(a == b);
  CHECK_FALSE(a == c);
}

TEST_CASE("replicated queue runs") {
  const auto cfg = queue(0.9, 0.9, 1'000'000, 100'000);
  const auto pooled = replicate_priority_queue(cfg, 10, 2024, 4);
  REQUIRE(pooled.runs.size() == 10);
  CHECK(std::abs(pooled.wait_1.mean / expected_wait_priority(cfg.params, 0.9) - 1.0) < 0.02);

  // Workload conservation, stochastically.
  const double target = 1.0 / (cfg.params.mu() - cfg.params.lambda());
  CHECK(std::abs(pooled.workload.mean - target) <= 3.0 * pooled.workload.se);
  for (const auto& r : pooled.runs) CHECK(r.mean_wait_1 <= r.mean_wait_2);

  SUBCASE("thread count does not change results") {
    const auto serial = replicate_priority_queue(queue(0.9, 0.9, 20'000, 2'000), 5, 77, 1);
    const auto parallel = replicate_priority_queue(queue(0.9, 0.9, 20'000, 2'000), 5, 77, 3);
    CHECK(serial.runs == parallel.runs);
  }
  SUBCASE("one replication equals a direct call with the derived seed") {
    auto small = queue(0.9, 0.9, 20'000, 2'000);
    const auto one = replicate_priority_queue(small, 1, 77, 1);
    small.seed = derive_seed(77, 0);
    CHECK(one.runs.front() == simulate_priority_queue(small));
  }
}

TEST_CASE("generic replicate keeps index order") {
  const auto seeds = replicate([](std::uint64_t s) { return s; }, 8, 5, 3);
  REQUIRE(seeds.size() == 8);
  for (std::size_t i = 0; i < seeds.size(); ++i) CHECK(seeds[i] == derive_seed(5, i));
}

TEST_CASE("summarize") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto s = summarize(v);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(summarize(std::vector<double>{7.0}).se == 0.0);
}

TEST_CASE("agent path jump structure") {
  const ModelParams ref;
  const auto path = simulate_agents(agents(ref, 500, 0.9, 10.0, 3));
  REQUIRE(path.times.size() == path.fractions.size());
  CHECK(path.times.front() == 0.0);
  for (std::size_t i = 1; i < path.times.size(); ++i) {
    CHECK(path.times[i] > path.times[i - 1]);
    CHECK(path.times[i] <= 10.0);
    CHECK(std::abs(std::abs(path.fractions[i] - path.fractions[i - 1]) * 500.0 - 1.0) < 1e-9);
  }
  CHECK(simulate_agents(agents(ref, 500, 0.9, 10.0, 3)) == path);
  CHECK_THROWS_AS(simulate_agents(agents(ref, 0, 0.9, 10.0, 3)), ParamError);
}

TEST_CASE("agents near the unstable equilibrium barely move") {
  const auto params = ModelParams{}.with_beta(0.0);
  const int n = 10'000;
  const double pe = critical_ratio(params).value;
  const int k = static_cast<int>(std::lround(pe * n));
  const double eps = std::abs(g_value(params, static_cast<double>(k) / n));
  const double bound = n * params.alpha() * eps;
  CHECK(total_event_rate(params, k, n) <= bound + 1e-12);
  CHECK(eps <= g_lipschitz_constant(params) * 0.5 / n);

  // Over a short window the rate stays near its initial value, so the mean
  // switch count is bounded by rate * t plus Poisson slack.
  const double t_end = 0.01;
  double switches = 0.0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) {
    const auto path = simulate_agents(agents(params, n, pe, t_end, 1000 + s));
    switches += static_cast<double>(path.times.size() - 1);
  }
  const double mean_bound = bound * t_end;
  CHECK(switches / seeds <= mean_bound + 3.0 * std::sqrt(mean_bound / seeds) + 0.05);
}

TEST_CASE("pure random switching tracks its closed form") {
  const auto params = ModelParams{}.with_alpha(0.0).with_beta(1.0);
  const auto path = simulate_agents(agents(params, 10'000, 1.0, 5.0, 8));
  double worst = 0.0;
  for (int i = 0; i <= 500; ++i) {
    const double t = 5.0 * i / 500.0;
    const double exact = 0.5 + 0.5 * std::exp(-2.0 * t);
    worst = std::max(worst, std::abs(path.fraction_at(t) - exact));
  }
  CHECK(worst <= 0.02);
  // The mean-field solver agrees with the same closed form.
  const auto ode = solve_fixed_point(params, 1.0, 5.0, 500);
  CHECK(std::abs(ode[500] - (0.5 + 0.5 * std::exp(-10.0))) < 1e-9);
  CHECK(sup_distance(path, ode) <= 0.02);
}

TEST_CASE("agents follow the mean-field trajectory") {
  const ModelParams ref;
  const auto ode = solve_fixed_point(ref, 0.9, 10.0, 2000);
  const auto path = simulate_agents(agents(ref, 10'000, 0.9, 10.0, 21));
  CHECK(sup_distance(path, ode) <= 0.02);
}

TEST_CASE("finite-population error shrinks with N") {
  const ModelParams ref;
  const auto ode = solve_fixed_point(ref, 0.9, 10.0, 2000);
  double previous = INFINITY;
  for (int n : {100, 1000, 10'000}) {
    const auto gaps = replicate(
        [&](std::uint64_t seed) {
          return sup_distance(simulate_agents(agents(ref, n, 0.9, 10.0, seed)), ode);
        },
        10, 99, 1);
    const double mean = summarize(gaps).mean;
    CHECK(mean < previous);
    previous = mean;
  }
}
