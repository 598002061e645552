#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "samba/report.hpp"
#include "samba/schedule.hpp"
#include "samba/theory.hpp"

namespace samba {

struct VerifyOptions {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  // Multiplies the embedded suite's replication count (2000).
  double scale = 1.0;
  std::size_t inequality_resolution = 10000;
  std::size_t recursion_cases = 1000;
  std::size_t shape_grid = 10000;
  // Grid for slowly varying schedules, whose gamma is a quadrature.
  std::size_t slowly_varying_shape_grid = 10000;
  std::size_t lambert_points = 100000;
  std::size_t drift_cases = 1000;
  std::uint64_t simplex_steps = 1000000;
};

// Schedules covered by the shape and simplex checks.
std::vector<Schedule> verification_schedules();

// |W e^W - y| / y <= 1e-12 on a log grid over [e, 1e8].
CheckResult check_lambert_accuracy(std::size_t points);

// Inequality suite, random recursions, schedule shapes, Lambert W accuracy.
Report verify_lemmas(const VerifyOptions& options);

// Random (instance, state, schedule) configurations with the optimal arm
// leading: the enumerated drift must match sum gamma(p_a)(r_a - r*) within
// 1e-12 and satisfy the schedule's supermartingale bound.
Report check_drift_oracle(std::size_t cases, std::uint64_t seed,
                          const theory::UpdateRule& rule =
                              theory::default_update_rule());

// Randomized SAMBA trajectories on random instances, split evenly across
// verification_schedules(): after every step |sum p - 1| <= 1e-9 and
// min p > 0.
CheckResult check_simplex_positivity(std::uint64_t steps, std::uint64_t seed);

// Drift oracle plus simplex/positivity.
Report verify_drift(const VerifyOptions& options,
                    const theory::UpdateRule& rule =
                        theory::default_update_rule());

// Nine arms 0.1..0.9, fixed alpha = 0.1, T = 1e5,
// R = ceil(2000 scale): embedded-chain decay at s in {1e2, 1e3, 1e4} and the
// transience plateau. Fewer than 100 replications is inconclusive.
Report verify_embedded(const VerifyOptions& options);

// "lemmas", "drift", "embedded" or "all". Throws ConfigError("suite") for
// other names.
Report run_verify_suite(std::string_view suite, const VerifyOptions& options);

}  // namespace samba
