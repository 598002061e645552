#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "samba/rng.hpp"

namespace samba {

using Arm = std::size_t;

// A stochastic bandit with fixed Bernoulli arm means.
//
// The optimal arm is the first index attaining the maximum mean. When the
// maximum is attained more than once the instance is degenerate: regret is
// still well defined but the gap is not, and the theory checks reject it.
class BanditInstance {
 public:
  // Throws std::invalid_argument for fewer than two arms or a mean outside
  // [0, 1].
  explicit BanditInstance(std::vector<double> means);

  std::size_t num_arms() const { return means_.size(); }
  const std::vector<double>& means() const { return means_; }
  double mean(Arm a) const { return means_.at(a); }
  Arm optimal_arm() const { return optimal_arm_; }
  double optimal_mean() const { return means_[optimal_arm_]; }
  const std::vector<double>& gaps() const { return gaps_; }
  double gap(Arm a) const { return gaps_.at(a); }
  bool degenerate() const { return degenerate_; }

  // Smallest positive gap; empty for degenerate instances.
  std::optional<double> min_gap() const { return min_gap_; }

 private:
  std::vector<double> means_;
  std::vector<double> gaps_;
  Arm optimal_arm_ = 0;
  bool degenerate_ = false;
  std::optional<double> min_gap_;
};

BanditInstance make_instance(std::span<const double> means);

// A probability vector over arms. Entries are non-negative and sum to one
// within kSimplexTolerance.
class ProbVector {
 public:
  static constexpr double kSimplexTolerance = 1e-9;

  // Validates; throws std::invalid_argument on a negative entry, a sum away
  // from one, or fewer than two entries.
  explicit ProbVector(std::vector<double> probs);

  std::size_t size() const { return probs_.size(); }
  double operator[](Arm a) const { return probs_[a]; }
  std::span<const double> values() const { return probs_; }
  const std::vector<double>& vec() const { return probs_; }

  // Unchecked mutable access for single-owner in-place updates.
  std::vector<double>& mutable_values() { return probs_; }

  bool valid() const;

 private:
  std::vector<double> probs_;
};

ProbVector uniform_probs(std::size_t n);

struct RewardSample {
  Arm arm;
  int reward;  // 0 or 1
};

// Draws one uniform from `rng` and returns reward 1 iff it falls below the
// arm's mean.
RewardSample sample_reward(const BanditInstance& instance, Arm arm,
                           RngStream& rng);

// Gap of the played arm, r* - r_played.
double per_step_pseudo_regret(const BanditInstance& instance, Arm played);

}  // namespace samba
