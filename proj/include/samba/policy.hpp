#pragma once

#include <optional>
#include <span>
#include <vector>

#include "samba/bandit.hpp"
#include "samba/rng.hpp"
#include "samba/schedule.hpp"

namespace samba {

// SAMBA state: the policy's own probabilities of playing each arm.
class SambaState {
 public:
  explicit SambaState(ProbVector probs) : probs_(std::move(probs)) {}

  std::size_t size() const { return probs_.size(); }
  double operator[](Arm a) const { return probs_[a]; }
  std::span<const double> probs() const { return probs_.values(); }
  const ProbVector& prob_vector() const { return probs_; }
  std::vector<double>& mutable_probs() { return probs_.mutable_values(); }

 private:
  ProbVector probs_;
};

// Argmax of probs. Ties are compared with exact floating-point equality and
// broken uniformly at random (one draw from rng, only when a tie occurs).
// Throws std::invalid_argument on an empty span.
Arm leading_arm(std::span<const double> probs, RngStream& rng);

// One draw from the categorical distribution `probs`.
Arm samba_select(std::span<const double> probs, RngStream& rng);

struct UpdateOptions {
  // When set, non-leader entries are raised to at least this value after the
  // update (the leader absorbs the difference). Off by default: positivity
  // holds without it.
  std::optional<double> floor;
};

// In-place update. For every a != leader
//   p_a += gamma(p_a) * (1{a=played} R / p_a - 1{leader=played} R / p_leader)
// and then p_leader = 1 - sum of the others. A zero reward leaves the state
// untouched. Throws ConfigError if an arm that moves has alpha(p_a) >= 1, and
// std::out_of_range for bad arm indices.
void samba_update_in_place(std::vector<double>& probs, const Schedule& schedule,
                           Arm leader, Arm played, int reward,
                           const UpdateOptions& options = {});

SambaState samba_update(const SambaState& state, const Schedule& schedule,
                        Arm leader, Arm played, int reward,
                        const UpdateOptions& options = {});

}  // namespace samba
