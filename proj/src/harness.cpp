#include "samba/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "samba/errors.hpp"

namespace samba {

void validate(const ExperimentConfig& config) {
  if (config.instances.empty()) {
    throw ConfigError("at least one bandit instance is required", "instances");
  }
  if (config.agents.empty()) {
    throw ConfigError("at least one agent is required", "agents");
  }
  if (config.horizon < 1) throw ConfigError("must be >= 1", "horizon");
  if (config.replications < 1) {
    throw ConfigError("must be >= 1", "replications");
  }
  if (config.snapshots.empty()) {
    throw ConfigError("at least one snapshot time is required", "snapshots");
  }
  for (std::size_t i = 0; i < config.snapshots.size(); ++i) {
    const auto t = config.snapshots[i];
    if (t < 1 || t > config.horizon) {
      throw ConfigError("snapshot times must lie in [1, horizon]", "snapshots");
    }
    if (i > 0 && t <= config.snapshots[i - 1]) {
      throw ConfigError("snapshot times must be strictly increasing",
                        "snapshots");
    }
  }
}

std::vector<std::uint64_t> snapshot_grid(std::uint64_t horizon,
                                         std::size_t n_points) {
  if (horizon < 1 || n_points < 1) {
    throw std::invalid_argument("snapshot_grid needs T >= 1 and n >= 1");
  }
  std::vector<std::uint64_t> out;
  if (n_points == 1) return {horizon};
  const double log_t = std::log10(static_cast<double>(horizon));
  for (std::size_t i = 0; i < n_points; ++i) {
    const double x =
        std::pow(10.0, log_t * static_cast<double>(i) /
                           static_cast<double>(n_points - 1));
    auto t = static_cast<std::uint64_t>(std::llround(x));
    t = std::clamp<std::uint64_t>(t, 1, horizon);
    if (out.empty() || t > out.back()) out.push_back(t);
  }
  if (out.back() != horizon) out.push_back(horizon);
  return out;
}

std::vector<BanditInstance> generate_instances(std::size_t n_arms, double low,
                                               double high,
                                               std::size_t n_instances,
                                               std::uint64_t seed) {
  if (!(low >= 0.0 && low < high && high <= 1.0)) {
    throw ConfigError("need 0 <= low < high <= 1", "generator");
  }
  if (n_arms < 2) throw ConfigError("n_arms must be >= 2", "generator");
  if (n_instances < 1) throw ConfigError("n_instances must be >= 1", "generator");
  RngStream rng(seed);
  std::vector<BanditInstance> out;
  out.reserve(n_instances);
  for (std::size_t k = 0; k < n_instances; ++k) {
    std::vector<double> means(n_arms);
    for (double& m : means) m = low + (high - low) * rng.uniform();
    out.emplace_back(std::move(means));
  }
  return out;
}

std::vector<ReplicationSnapshot> run_replication(
    const BanditInstance& instance, const AgentSpec& spec,
    std::uint64_t horizon, std::uint64_t seed,
    std::span<const std::uint64_t> snapshots) {
  if (horizon < 1) throw ConfigError("must be >= 1", "horizon");
  Agent agent(spec, instance.num_arms());
  RngStream rng(seed);
  const Arm best = instance.optimal_arm();
  const double r_star = instance.optimal_mean();

  std::vector<ReplicationSnapshot> out;
  out.reserve(snapshots.size());
  std::size_t next = 0;
  double pseudo = 0.0;
  double realized = 0.0;
  simulate(instance, agent, horizon, rng,
           [&](std::uint64_t t, Arm played, int reward, const Agent& a) {
             pseudo += instance.gaps()[played];
             realized += r_star - reward;
             while (next < snapshots.size() && snapshots[next] == t) {
               ReplicationSnapshot s;
               s.t = t;
               s.pseudo_regret = pseudo;
               s.realized_regret = realized;
               if (a.is_samba()) s.p_optimal = a.samba_probs()[best];
               s.suboptimal_play = played != best ? 1 : 0;
               out.push_back(s);
               ++next;
             }
           });
  return out;
}

std::vector<MetricsRow> MetricsTable::select(const std::string& agent,
                                             std::size_t instance) const {
  std::vector<MetricsRow> out;
  for (const auto& r : rows) {
    if (r.agent == agent && r.instance == instance) out.push_back(r);
  }
  return out;
}

std::string format_float(double x) {
  if (!std::isfinite(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& out, const MetricsTable& table) {
  out << kMetricsCsvHeader << '\n';
  for (const auto& r : table.rows) {
    out << csv_field(r.agent) << ',' << r.instance << ',' << r.t << ','
        << format_float(r.pseudo_regret_mean) << ','
        << format_float(r.pseudo_regret_se) << ','
        << format_float(r.realized_regret_mean) << ','
        << format_float(r.p_optimal_mean) << ','
        << format_float(r.p_suboptimal_play) << ',' << r.runs << '\n';
  }
}

void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& task) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

MetricsTable run_experiment(const ExperimentConfig& config, unsigned jobs) {
  validate(config);
  // Surface construction errors before spawning work.
  for (const auto& spec : config.agents) {
    for (const auto& inst : config.instances) Agent(spec, inst.num_arms());
  }

  const std::size_t n_agents = config.agents.size();
  const std::size_t n_inst = config.instances.size();
  const std::uint64_t reps = config.replications;
  const std::size_t n_tasks = n_agents * n_inst * reps;
  std::vector<std::vector<ReplicationSnapshot>> results(n_tasks);

  parallel_for(n_tasks, jobs, [&](std::size_t task) {
    const std::size_t agent = task / (n_inst * reps);
    const std::size_t inst = (task / reps) % n_inst;
    const std::uint64_t run = task % reps;
    results[task] = run_replication(
        config.instances[inst], config.agents[agent], config.horizon,
        replication_seed(config, agent, inst, run), config.snapshots);
  });

  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double r = static_cast<double>(reps);
  MetricsTable table;
  table.rows.reserve(n_agents * n_inst * config.snapshots.size());
  for (std::size_t agent = 0; agent < n_agents; ++agent) {
    const std::string& name = config.agents[agent].name.empty()
                                  ? default_agent_name(config.agents[agent].kind)
                                  : config.agents[agent].name;
    for (std::size_t inst = 0; inst < n_inst; ++inst) {
      const std::size_t base = (agent * n_inst + inst) * reps;
      for (std::size_t k = 0; k < config.snapshots.size(); ++k) {
        double pseudo = 0.0, realized = 0.0, p_opt = 0.0;
        std::uint64_t subopt = 0;
        for (std::uint64_t run = 0; run < reps; ++run) {
          const auto& s = results[base + run][k];
          pseudo += s.pseudo_regret;
          realized += s.realized_regret;
          p_opt += s.p_optimal;
          subopt += static_cast<std::uint64_t>(s.suboptimal_play);
        }
        const double pseudo_mean = pseudo / r;
        double ss = 0.0;
        for (std::uint64_t run = 0; run < reps; ++run) {
          const double d = results[base + run][k].pseudo_regret - pseudo_mean;
          ss += d * d;
        }
        MetricsRow row;
        row.agent = name;
        row.instance = inst;
        row.t = config.snapshots[k];
        row.pseudo_regret_mean = config.metrics.pseudo_regret ? pseudo_mean : nan;
        row.pseudo_regret_se =
            !config.metrics.pseudo_regret ? nan
            : reps > 1 ? std::sqrt(ss / (r - 1.0)) / std::sqrt(r)
                       : 0.0;
        row.realized_regret_mean =
            config.metrics.realized_regret ? realized / r : nan;
        row.p_optimal_mean = config.metrics.p_optimal ? p_opt / r : nan;
        row.p_suboptimal_play =
            config.metrics.suboptimal_play ? static_cast<double>(subopt) / r
                                           : nan;
        row.runs = reps;
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

}  // namespace samba
