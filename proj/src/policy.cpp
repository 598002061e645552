#include "samba/policy.hpp"

#include <stdexcept>
#include <string>

#include "samba/errors.hpp"

namespace samba {
namespace {

// Step size gamma(p) together with the guard alpha(p) < 1.
double guarded_gamma(const Schedule& schedule, double p) {
  double alpha = 0.0;
  double gamma = 0.0;
  if (schedule.kind() == ScheduleKind::SlowlyVarying) {
    gamma = schedule.gamma(p);
    alpha = gamma / (p * p);
  } else {
    alpha = schedule.alpha(p);
    gamma = alpha * p * p;
  }
  if (!(alpha < 1.0)) {
    throw ConfigError("schedule produced alpha(p)=" + std::to_string(alpha) +
                          " >= 1 at p=" + std::to_string(p) +
                          "; the update needs alpha < 1 to stay positive",
                      "schedule");
  }
  return gamma;
}

}  // namespace

Arm leading_arm(std::span<const double> probs, RngStream& rng) {
  if (probs.empty()) throw std::invalid_argument("leading_arm: empty state");
  Arm best = 0;
  std::size_t ties = 1;
  for (Arm a = 1; a < probs.size(); ++a) {
    if (probs[a] > probs[best]) {
      best = a;
      ties = 1;
    } else if (probs[a] == probs[best]) {
      ++ties;
    }
  }
  if (ties == 1) return best;
  auto pick = rng.below(ties);
  for (Arm a = best; a < probs.size(); ++a) {
    if (probs[a] == probs[best] && pick-- == 0) return a;
  }
  return best;
}

Arm samba_select(std::span<const double> probs, RngStream& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  Arm last_positive = 0;
  for (Arm a = 0; a < probs.size(); ++a) {
    if (probs[a] <= 0.0) continue;
    acc += probs[a];
    last_positive = a;
    if (u < acc) return a;
  }
  return last_positive;
}

void samba_update_in_place(std::vector<double>& probs, const Schedule& schedule,
                           Arm leader, Arm played, int reward,
                           const UpdateOptions& options) {
  const std::size_t n = probs.size();
  if (leader >= n || played >= n) {
    throw std::out_of_range("samba_update: arm out of range");
  }
  if (reward != 0 && reward != 1) {
    throw std::invalid_argument("samba_update: reward must be 0 or 1");
  }
  if (reward == 0) return;

  if (played != leader) {
    // Only the played arm moves up; the leader absorbs it.
    const double p = probs[played];
    probs[played] = p + guarded_gamma(schedule, p) * (1.0 / p);
  } else {
    const double inv_leader = 1.0 / probs[leader];
    for (Arm a = 0; a < n; ++a) {
      if (a == leader || probs[a] <= 0.0) continue;
      const double p = probs[a];
      probs[a] = p - guarded_gamma(schedule, p) * inv_leader;
    }
  }

  double rest = 0.0;
  for (Arm a = 0; a < n; ++a) {
    if (a == leader) continue;
    if (options.floor && probs[a] < *options.floor) probs[a] = *options.floor;
    rest += probs[a];
  }
  probs[leader] = 1.0 - rest;
}

SambaState samba_update(const SambaState& state, const Schedule& schedule,
                        Arm leader, Arm played, int reward,
                        const UpdateOptions& options) {
  std::vector<double> probs(state.probs().begin(), state.probs().end());
  samba_update_in_place(probs, schedule, leader, played, reward, options);
  return SambaState(ProbVector(std::move(probs)));
}

}  // namespace samba
