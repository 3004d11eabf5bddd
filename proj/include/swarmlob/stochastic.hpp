#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

#include "swarmlob/dynamics.hpp"
#include "swarmlob/model.hpp"

namespace swarmlob {

// SplitMix64 finaliser. Also the replication seed-splitting rule:
//   seed_r = splitmix64(base_seed + (r + 1) * 0x9E3779B97F4A7C15)
std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t base_seed, std::size_t replication) noexcept;

struct QueueSimConfig {
  ModelParams params;
  double p = 0.9;                       // probability a sell order is placed at theta1
  std::uint64_t n_orders = 1'000'000;   // sell orders indexed 0..n_orders-1
  std::uint64_t warmup_orders = 100'000;
  std::uint64_t seed = 1;

  void validate() const;
};

struct QueueSimStats {
  double mean_wait_1 = 0.0;
  double mean_wait_2 = 0.0;
  double sem_1 = 0.0;  // batch-means standard error
  double sem_2 = 0.0;
  std::uint64_t n_1 = 0;
  std::uint64_t n_2 = 0;
  std::uint64_t discarded_buys = 0;

  friend bool operator==(const QueueSimStats&, const QueueSimStats&) = default;
};

// Event-driven simulation of the one-sided book as a two-class
// priority queue. Sell orders arrive at rate lambda and join queue 1 with
// probability p; buy orders arrive at rate mu and execute the head of queue 1,
// else queue 2, else are discarded. Orders with index in
// [warmup_orders, n_orders) are measured; the run continues until all of
// them have executed, with later arrivals still competing for priority.
QueueSimStats simulate_priority_queue(const QueueSimConfig& config);

struct AgentSimConfig {
  ModelParams params;
  int n_agents = 10'000;
  double p0 = 0.9;
  double t_end = 10.0;
  std::uint64_t seed = 1;

  void validate() const;
};

// Piecewise-constant path of the empirical theta1 fraction. times[0] = 0 and
// each later entry is a switch epoch at which the fraction moves by +/- 1/N.
struct AgentSimPath {
  int n_agents = 0;
  double t_end = 0.0;
  std::vector<double> times;
  std::vector<double> fractions;

  double fraction_at(double t) const;

  friend bool operator==(const AgentSimPath&, const AgentSimPath&) = default;
};

// Sum of individual switching intensities with k of N agents at theta1.
double total_event_rate(const ModelParams& params, int k, int n_agents);

// Exact (Gillespie) simulation of N traders switching under the rates
// evaluated at the current empirical fraction.
AgentSimPath simulate_agents(const AgentSimConfig& config);

// Sup-norm gap between an agent path and a mean-field trajectory, checked at
// every grid node and on both sides of every switch epoch.
double sup_distance(const AgentSimPath& agents, const PredictionPath& mean_field);

struct Summary {
  double mean = 0.0;
  double se = 0.0;  // sample standard deviation / sqrt(n); 0 for n < 2
};

Summary summarize(std::span<const double> samples);

// Runs `run(seed_r)` for r = 0..n-1 with seeds from derive_seed, on up to
// `threads` workers (0 = hardware concurrency). Results are ordered by
// replication index and do not depend on the thread count.
template <class F>
auto replicate(F&& run, std::size_t n_replications, std::uint64_t base_seed,
               unsigned threads = 0) -> std::vector<std::invoke_result_t<F&, std::uint64_t>> {
  using Result = std::invoke_result_t<F&, std::uint64_t>;
  if (n_replications == 0) return {};
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_replications));

  std::vector<std::optional<Result>> slots(n_replications);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_replications; i = next++) {
      slots[i].emplace(run(derive_seed(base_seed, i)));
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<Result> out;
  out.reserve(n_replications);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct PooledQueueStats {
  std::vector<QueueSimStats> runs;
  Summary wait_1;
  Summary wait_2;
  // p * mean_wait_1 + (1 - p) * mean_wait_2 per run; its expectation is 1/(mu - lambda).
  Summary workload;
};

// config.seed is ignored; run r uses derive_seed(base_seed, r).
PooledQueueStats replicate_priority_queue(const QueueSimConfig& config,
                                          std::size_t n_replications, std::uint64_t base_seed,
                                          unsigned threads = 0);

}  // namespace swarmlob
