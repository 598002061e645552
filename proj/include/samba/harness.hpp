#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "samba/agent.hpp"
#include "samba/bandit.hpp"
#include "samba/rng.hpp"

namespace samba {

// Which CSV columns are computed; disabled columns are written as nan.
struct MetricsFlags {
  bool pseudo_regret = true;
  bool realized_regret = true;
  bool p_optimal = true;
  bool suboptimal_play = true;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<BanditInstance> instances;
  std::vector<AgentSpec> agents;
  std::uint64_t horizon = 0;
  std::uint64_t replications = 0;
  std::uint64_t base_seed = 0;
  std::vector<std::uint64_t> snapshots;  // sorted, within [1, horizon]
  MetricsFlags metrics;
};

// Throws ConfigError naming the offending key.
void validate(const ExperimentConfig& config);

// n log-spaced times ending at T, rounded to integers and deduplicated.
std::vector<std::uint64_t> snapshot_grid(std::uint64_t horizon,
                                         std::size_t n_points);

// Means i.i.d. uniform on [low, high], drawn once from a stream seeded by
// `seed` (instance k uses the k-th block of n_arms draws).
std::vector<BanditInstance> generate_instances(std::size_t n_arms, double low,
                                               double high,
                                               std::size_t n_instances,
                                               std::uint64_t seed);

// Runs select -> reward -> update for steps t = 1..horizon, calling
// observer(t, played, reward, agent) after each update.
template <typename Observer>
void simulate(const BanditInstance& instance, Agent& agent,
              std::uint64_t horizon, RngStream& rng, Observer&& observer) {
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    const Arm played = agent.select(rng);
    const int reward = sample_reward(instance, played, rng).reward;
    agent.update(played, reward);
    observer(t, played, reward, agent);
  }
}

struct ReplicationSnapshot {
  std::uint64_t t = 0;
  double pseudo_regret = 0.0;    // sum of gaps of played arms up to t
  double realized_regret = 0.0;  // sum of r* - R over steps up to t
  // p of the optimal arm after step t; NaN for non-SAMBA agents.
  double p_optimal = std::numeric_limits<double>::quiet_NaN();
  int suboptimal_play = 0;  // 1 iff the arm played at step t is not a*
};

// One replication. Throws ConfigError if the agent cannot be built or the
// horizon is 0.
std::vector<ReplicationSnapshot> run_replication(
    const BanditInstance& instance, const AgentSpec& agent,
    std::uint64_t horizon, std::uint64_t seed,
    std::span<const std::uint64_t> snapshots);

struct MetricsRow {
  std::string agent;
  std::size_t instance = 0;
  std::uint64_t t = 0;
  double pseudo_regret_mean = 0.0;
  double pseudo_regret_se = 0.0;
  double realized_regret_mean = 0.0;
  double p_optimal_mean = 0.0;
  double p_suboptimal_play = 0.0;
  std::uint64_t runs = 0;
};

struct MetricsTable {
  std::vector<MetricsRow> rows;

  // Rows for one (agent, instance) pair in snapshot order.
  std::vector<MetricsRow> select(const std::string& agent,
                                 std::size_t instance) const;
};

inline constexpr const char* kMetricsCsvHeader =
    "agent,instance,t,pseudo_regret_mean,pseudo_regret_se,"
    "realized_regret_mean,p_optimal_mean,p_suboptimal_play,runs";

// "%.9g"; non-finite values render as "nan".
std::string format_float(double x);

// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

// Header plus one line per row, LF line endings.
void write_csv(std::ostream& out, const MetricsTable& table);

// Seed of replication `run` for (agent, instance).
inline std::uint64_t replication_seed(const ExperimentConfig& config,
                                      std::size_t agent, std::size_t instance,
                                      std::uint64_t run) {
  return derive_seed(config.base_seed, agent, instance, run);
}

// Runs every (agent, instance, run) on `jobs` worker threads (0 = hardware
// concurrency). Results are reduced in run-index order, so the table is
// identical for any job count.
MetricsTable run_experiment(const ExperimentConfig& config, unsigned jobs = 1);

// Calls task(i) for i in [0, count) on up to `jobs` threads. Exceptions are
// rethrown (the first one by task index) after all workers finish.
void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& task);

}  // namespace samba
