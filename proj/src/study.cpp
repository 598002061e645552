#include "samba/study.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "samba/agent.hpp"
#include "samba/errors.hpp"
#include "samba/harness.hpp"

namespace samba {
namespace {

constexpr std::uint64_t kChunk = 25;

struct ChunkResult {
  std::vector<std::vector<double>> q;       // [rep][snapshot]
  std::vector<std::vector<double>> regret;  // [rep][snapshot]
  std::vector<std::vector<double>> embedded;
  theory::TransienceCounter transience{0};
  std::uint64_t locked_in = 0;
};

}  // namespace

SambaStudyResult run_samba_study(const SambaStudyConfig& config,
                                 unsigned jobs) {
  if (config.horizon < 1) throw ConfigError("must be >= 1", "horizon");
  if (config.replications < 1) throw ConfigError("must be >= 1", "replications");
  for (std::size_t i = 0; i < config.snapshots.size(); ++i) {
    const auto t = config.snapshots[i];
    if (t < 1 || t > config.horizon ||
        (i > 0 && t <= config.snapshots[i - 1])) {
      throw ConfigError("snapshot times must be increasing within [1, horizon]",
                        "snapshots");
    }
  }

  const BanditInstance& instance = config.instance;
  const AgentSpec spec = make_agent_spec(SambaSpec{config.schedule, {}, {}});
  const Arm best = instance.optimal_arm();
  const std::uint64_t reps = config.replications;
  const std::size_t n_chunks = (reps + kChunk - 1) / kChunk;
  std::vector<ChunkResult> chunks(n_chunks);

  parallel_for(n_chunks, jobs, [&](std::size_t c) {
    ChunkResult& out = chunks[c];
    if (config.track_transience) {
      out.transience = theory::TransienceCounter(config.horizon);
    }
    const std::uint64_t first = c * kChunk;
    const std::uint64_t last = std::min(reps, first + kChunk);
    for (std::uint64_t run = first; run < last; ++run) {
      Agent agent(spec, instance.num_arms());
      RngStream rng(derive_seed(config.base_seed, 0, 0, run));
      theory::EmbeddedSampler sampler(config.embedded_points);
      std::vector<double> q_snap, regret_snap;
      q_snap.reserve(config.snapshots.size());
      regret_snap.reserve(config.snapshots.size());
      std::size_t next = 0;
      double pseudo = 0.0;

      const double q0 = 1.0 - agent.samba_probs()[best];
      sampler.push(q0);
      if (config.track_transience) out.transience.push(0, q0);
      simulate(instance, agent, config.horizon, rng,
               [&](std::uint64_t t, Arm played, int, const Agent& a) {
                 pseudo += instance.gaps()[played];
                 const double q = 1.0 - a.samba_probs()[best];
                 sampler.push(q);
                 if (config.track_transience) out.transience.push(t, q);
                 if (next < config.snapshots.size() &&
                     config.snapshots[next] == t) {
                   q_snap.push_back(q);
                   regret_snap.push_back(pseudo);
                   ++next;
                 }
               });
      if (config.track_transience) out.transience.end_replication();

      const auto probs = agent.samba_probs();
      for (Arm a = 0; a < probs.size(); ++a) {
        if (a != best && probs[a] > config.lock_in_threshold) {
          ++out.locked_in;
          break;
        }
      }
      out.q.push_back(std::move(q_snap));
      out.regret.push_back(std::move(regret_snap));
      out.embedded.push_back(sampler.samples());
    }
  });

  SambaStudyResult result;
  result.snapshots = config.snapshots;
  result.replications = reps;
  if (config.track_transience) {
    result.transience = theory::TransienceCounter(config.horizon);
  }
  const std::size_t k_snap = config.snapshots.size();
  std::vector<double> sum(k_snap, 0.0), regret_sum(k_snap, 0.0);
  for (auto& c : chunks) {
    for (std::size_t r = 0; r < c.q.size(); ++r) {
      for (std::size_t k = 0; k < k_snap; ++k) {
        sum[k] += c.q[r][k];
        regret_sum[k] += c.regret[r][k];
      }
      result.embedded.push_back(std::move(c.embedded[r]));
    }
    if (config.track_transience) result.transience.merge(c.transience);
    result.locked_in += c.locked_in;
  }
  const double n = static_cast<double>(reps);
  result.q_mean.resize(k_snap);
  result.q_se.assign(k_snap, 0.0);
  result.pseudo_regret_mean.resize(k_snap);
  for (std::size_t k = 0; k < k_snap; ++k) {
    result.q_mean[k] = sum[k] / n;
    result.pseudo_regret_mean[k] = regret_sum[k] / n;
  }
  if (reps > 1) {
    std::vector<double> ss(k_snap, 0.0);
    for (const auto& c : chunks) {
      for (const auto& row : c.q) {
        for (std::size_t k = 0; k < k_snap; ++k) {
          const double d = row[k] - result.q_mean[k];
          ss[k] += d * d;
        }
      }
    }
    for (std::size_t k = 0; k < k_snap; ++k) {
      result.q_se[k] = std::sqrt(ss[k] / (n - 1.0)) / std::sqrt(n);
    }
  }
  return result;
}

double log_log_slope(const std::vector<std::uint64_t>& x,
                     const std::vector<double>& y, double lo, double hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    const double xi = static_cast<double>(x[i]);
    if (xi < lo || xi > hi || !(y[i] > 0.0)) continue;
    const double lx = std::log(xi);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = static_cast<double>(n);
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / denom;
}

}  // namespace samba
