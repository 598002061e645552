#include "samba/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace samba {

BanditInstance::BanditInstance(std::vector<double> means)
    : means_(std::move(means)) {
  if (means_.size() < 2) {
    throw std::invalid_argument("bandit instance needs at least 2 arms");
  }
  for (std::size_t a = 0; a < means_.size(); ++a) {
    const double m = means_[a];
    if (!(m >= 0.0 && m <= 1.0)) {
      throw std::invalid_argument("arm " + std::to_string(a) +
                                  " mean outside [0,1]");
    }
  }
  optimal_arm_ = static_cast<Arm>(
      std::max_element(means_.begin(), means_.end()) - means_.begin());
  const double best = means_[optimal_arm_];
  gaps_.resize(means_.size());
  std::size_t n_best = 0;
  double smallest = 0.0;
  for (std::size_t a = 0; a < means_.size(); ++a) {
    gaps_[a] = best - means_[a];
    if (means_[a] == best) {
      ++n_best;
    } else if (smallest == 0.0 || gaps_[a] < smallest) {
      smallest = gaps_[a];
    }
  }
  degenerate_ = n_best > 1;
  if (!degenerate_) min_gap_ = smallest;
}

BanditInstance make_instance(std::span<const double> means) {
  return BanditInstance(std::vector<double>(means.begin(), means.end()));
}

ProbVector::ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw std::invalid_argument("probability vector needs at least 2 entries");
  }
  if (!valid()) {
    throw std::invalid_argument(
        "probability vector must be non-negative and sum to 1");
  }
}

bool ProbVector::valid() const {
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= kSimplexTolerance;
}

ProbVector uniform_probs(std::size_t n) {
  if (n < 2) throw std::invalid_argument("uniform_probs needs n >= 2");
  return ProbVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

RewardSample sample_reward(const BanditInstance& instance, Arm arm,
                           RngStream& rng) {
  if (arm >= instance.num_arms()) throw std::out_of_range("arm out of range");
  return {arm, rng.bernoulli(instance.mean(arm)) ? 1 : 0};
}

double per_step_pseudo_regret(const BanditInstance& instance, Arm played) {
  if (played >= instance.num_arms()) {
    throw std::out_of_range("arm out of range");
  }
  return instance.gaps()[played];
}

}  // namespace samba
