#pragma once

#include <cstdint>
#include <vector>

#include "samba/bandit.hpp"
#include "samba/schedule.hpp"
#include "samba/theory.hpp"

namespace samba {

// Single-pass Monte Carlo study of one SAMBA schedule on one instance. Each
// replication records q = 1 - p_{a*} at snapshot times, the embedded chain at
// the requested embedded times, per-time transience counts and whether the
// final state is locked onto a suboptimal arm.
struct SambaStudyConfig {
  BanditInstance instance{std::vector<double>{0.0, 1.0}};
  Schedule schedule = Schedule::fixed(0.1);
  std::uint64_t horizon = 100000;
  std::uint64_t replications = 2000;
  std::uint64_t base_seed = 0;
  std::vector<std::uint64_t> snapshots;
  std::vector<std::uint64_t> embedded_points;
  // Final p on some suboptimal arm above this counts as locked in.
  double lock_in_threshold = 0.99;
  bool track_transience = true;
};

struct SambaStudyResult {
  std::vector<std::uint64_t> snapshots;
  std::vector<double> q_mean;  // mean of 1 - p_{a*}(t) per snapshot
  std::vector<double> q_se;
  std::vector<double> pseudo_regret_mean;  // at each snapshot
  // embedded[r][k]: replication r's q_hat at embedded_points[k] (NaN if the
  // chain was not that long).
  std::vector<std::vector<double>> embedded;
  theory::TransienceCounter transience{0};
  std::uint64_t locked_in = 0;  // replications locked onto a suboptimal arm
  std::uint64_t replications = 0;

  double lock_in_fraction() const {
    return replications ? static_cast<double>(locked_in) /
                              static_cast<double>(replications)
                        : 0.0;
  }
};

// Replication r uses seed derive_seed(base_seed, 0, 0, r), matching
// run_experiment for a single SAMBA agent on a single instance.
SambaStudyResult run_samba_study(const SambaStudyConfig& config,
                                 unsigned jobs = 1);

// Ordinary least-squares slope of log(y) against log(x) over points with
// lo <= x <= hi and y > 0. NaN with fewer than two usable points.
double log_log_slope(const std::vector<std::uint64_t>& x,
                     const std::vector<double>& y, double lo, double hi);

}  // namespace samba
