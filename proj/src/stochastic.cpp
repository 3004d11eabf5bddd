#include "swarmlob/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace swarmlob {

namespace {

// Draws are built from raw 64-bit outputs so a given seed yields the same
// stream on every standard library.
class Stream {
public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

private:
  std::mt19937_64 engine_;
};

struct Order {
  double arrival;
  std::uint64_t index;
};

// Per-batch accumulators for one price class.
struct BatchSums {
  std::vector<double> sum;
  std::vector<std::uint64_t> count;

  explicit BatchSums(std::size_t n) : sum(n, 0.0), count(n, 0) {}

  void add(std::size_t batch, double wait) {
    sum[batch] += wait;
    ++count[batch];
  }

  std::uint64_t total_count() const {
    std::uint64_t n = 0;
    for (auto c : count) n += c;
    return n;
  }

  double mean() const {
    double s = 0.0;
    for (double v : sum) s += v;
    const auto n = total_count();
    return n == 0 ? 0.0 : s / static_cast<double>(n);
  }

  double batch_means_sem() const {
    std::vector<double> means;
    for (std::size_t b = 0; b < sum.size(); ++b) {
      if (count[b] > 0) means.push_back(sum[b] / static_cast<double>(count[b]));
    }
    return summarize(means).se;
  }
};

constexpr std::size_t kBatches = 32;

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::size_t replication) noexcept {
  return splitmix64(base_seed + (static_cast<std::uint64_t>(replication) + 1) *
                                    0x9E3779B97F4A7C15ull);
}

void QueueSimConfig::validate() const {
  require_ratio(p, "p");
  if (!(n_orders > warmup_orders)) {
    throw ParamError("n_orders", "must exceed warmup_orders");
  }
}

QueueSimStats simulate_priority_queue(const QueueSimConfig& config) {
  config.validate();
  const double lambda = config.params.lambda();
  const double total_rate = lambda + config.params.mu();
  const double sell_share = lambda / total_rate;
  const std::uint64_t measured = config.n_orders - config.warmup_orders;
  const auto n_batches =
      static_cast<std::size_t>(std::min<std::uint64_t>(kBatches, measured));

  Stream rng(config.seed);
  std::deque<Order> queue_1;
  std::deque<Order> queue_2;
  BatchSums class_1(n_batches);
  BatchSums class_2(n_batches);
  QueueSimStats stats;

  double now = 0.0;
  std::uint64_t next_index = 0;
  std::uint64_t executed = 0;

  const auto execute = [&](std::deque<Order>& queue, BatchSums& sums) {
    const Order order = queue.front();
    queue.pop_front();
    if (order.index < config.warmup_orders || order.index >= config.n_orders) return;
    const auto offset = order.index - config.warmup_orders;
    sums.add(static_cast<std::size_t>(offset * n_batches / measured), now - order.arrival);
    ++executed;
  };

  while (executed < measured) {
    now += rng.exponential(total_rate);
    if (rng.uniform() < sell_share) {
      auto& queue = rng.uniform() < config.p ? queue_1 : queue_2;
      queue.push_back({now, next_index++});
    } else if (!queue_1.empty()) {
      execute(queue_1, class_1);
    } else if (!queue_2.empty()) {
      execute(queue_2, class_2);
    } else {
      ++stats.discarded_buys;
    }
  }

  stats.mean_wait_1 = class_1.mean();
  stats.mean_wait_2 = class_2.mean();
  stats.sem_1 = class_1.batch_means_sem();
  stats.sem_2 = class_2.batch_means_sem();
  stats.n_1 = class_1.total_count();
  stats.n_2 = class_2.total_count();
  return stats;
}

void AgentSimConfig::validate() const {
  if (n_agents < 1) throw ParamError("n_agents", "must be >= 1");
  require_ratio(p0, "p0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ParamError("t_end", "must be > 0");
}

double AgentSimPath::fraction_at(double t) const {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return fractions.front();
  return fractions[static_cast<std::size_t>(it - times.begin()) - 1];
}

double total_event_rate(const ModelParams& params, int k, int n_agents) {
  const auto rates = rates_at(params, static_cast<double>(k) / n_agents);
  return k * rates.alpha1 + (n_agents - k) * rates.alpha2;
}

AgentSimPath simulate_agents(const AgentSimConfig& config) {
  config.validate();
  const int n = config.n_agents;
  int k = static_cast<int>(std::lround(config.p0 * n));
  Stream rng(config.seed);

  AgentSimPath path;
  path.n_agents = n;
  path.t_end = config.t_end;
  path.times.push_back(0.0);
  path.fractions.push_back(static_cast<double>(k) / n);

  double now = 0.0;
  for (;;) {
    const auto rates = rates_at(config.params, static_cast<double>(k) / n);
    const double leave_1 = k * rates.alpha1;
    const double total = leave_1 + (n - k) * rates.alpha2;
    if (!(total > 0.0)) break;
    now += rng.exponential(total);
    if (now > config.t_end) break;
    if (rng.uniform() * total < leave_1) {
      --k;
    } else {
      ++k;
    }
    path.times.push_back(now);
    path.fractions.push_back(static_cast<double>(k) / n);
  }
  return path;
}

double sup_distance(const AgentSimPath& agents, const PredictionPath& mean_field) {
  if (mean_field.t_end() < agents.t_end) {
    throw std::invalid_argument("mean-field path does not cover the agent horizon");
  }
  const double h = mean_field.step();
  const int n = mean_field.n_steps();
  const auto ode_at = [&](double t) {
    const int k = std::min(n - 1, static_cast<int>(t / h));
    const double w = (t - mean_field.time(k)) / h;
    return (1.0 - w) * mean_field[k] + w * mean_field[k + 1];
  };

  double sup = 0.0;
  for (int k = 0; k <= n && mean_field.time(k) <= agents.t_end; ++k) {
    sup = std::max(sup, std::abs(agents.fraction_at(mean_field.time(k)) - mean_field[k]));
  }
  for (std::size_t i = 1; i < agents.times.size(); ++i) {
    const double x = ode_at(agents.times[i]);
    sup = std::max(sup, std::abs(agents.fractions[i - 1] - x));
    sup = std::max(sup, std::abs(agents.fractions[i] - x));
  }
  return sup;
}

Summary summarize(std::span<const double> samples) {
  Summary s;
  if (samples.empty()) return s;
  double sum = 0.0;
  for (double v : samples) sum += v;
  const auto n = static_cast<double>(samples.size());
  s.mean = sum / n;
  if (samples.size() < 2) return s;
  double ss = 0.0;
  for (double v : samples) ss += (v - s.mean) * (v - s.mean);
  s.se = std::sqrt(ss / (n - 1.0) / n);
  return s;
}

PooledQueueStats replicate_priority_queue(const QueueSimConfig& config,
                                          std::size_t n_replications, std::uint64_t base_seed,
                                          unsigned threads) {
  config.validate();
  PooledQueueStats pooled;
  pooled.runs = replicate(
      [&config](std::uint64_t seed) {
        QueueSimConfig c = config;
        c.seed = seed;
        return simulate_priority_queue(c);
      },
      n_replications, base_seed, threads);

  std::vector<double> w1;
  std::vector<double> w2;
  std::vector<double> workload;
  for (const auto& r : pooled.runs) {
    w1.push_back(r.mean_wait_1);
    w2.push_back(r.mean_wait_2);
    workload.push_back(config.p * r.mean_wait_1 + (1.0 - config.p) * r.mean_wait_2);
  }
  pooled.wait_1 = summarize(w1);
  pooled.wait_2 = summarize(w2);
  pooled.workload = summarize(workload);
  return pooled;
}

}  // namespace swarmlob
