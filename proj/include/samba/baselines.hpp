#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "samba/bandit.hpp"
#include "samba/rng.hpp"

namespace samba {

// Thompson sampling with a uniform Beta(1,1) prior on every arm.
struct ThompsonState {
  std::vector<double> successes_plus_one;
  std::vector<double> failures_plus_one;
};

// UCB1: index mean_a + sqrt(2 ln t / n_a), unplayed arms first.
struct Ucb1State {
  std::vector<std::uint64_t> counts;
  std::vector<double> reward_sums;
  std::uint64_t t = 0;  // completed steps
};

// Exp3, anytime gain-based form: P(a) proportional to exp(eta_t G_a) where
// G_a accumulates importance-weighted rewards and eta_t is recomputed at
// every step.
struct Exp3State {
  std::vector<double> gain_estimates;
  std::uint64_t t = 0;  // completed steps
};

// Gradient bandit: softmax over preferences H with an average-reward
// baseline.
struct GbaState {
  std::vector<double> preferences;
  double mean_reward = 0.0;
  std::uint64_t steps = 0;
  double step_size = 0.1;
};

enum class EpsMode { Fixed, Decaying };

// epsilon-greedy over sample means; decaying mode uses
// eps_t = min(1, 100 / t) with t counted from 1.
struct EpsGreedyState {
  std::vector<double> reward_sums;
  std::vector<std::uint64_t> counts;
  std::uint64_t t = 0;  // completed steps
  EpsMode mode = EpsMode::Decaying;
  double epsilon = 0.1;
};

// Uniformly random play. Reference agent for harness checks.
struct UniformState {
  std::size_t n_arms = 0;
};

using AgentState = std::variant<ThompsonState, Ucb1State, Exp3State, GbaState,
                                EpsGreedyState, UniformState>;

ThompsonState make_thompson(std::size_t n_arms);
Ucb1State make_ucb1(std::size_t n_arms);
Exp3State make_exp3(std::size_t n_arms);
GbaState make_gba(std::size_t n_arms, double step_size);
EpsGreedyState make_eps_greedy(std::size_t n_arms, EpsMode mode,
                               double epsilon = 0.0);

std::size_t num_arms(const AgentState& state);

Arm baseline_select(const AgentState& state, RngStream& rng);

// Throws std::out_of_range for a bad arm, std::invalid_argument for a reward
// outside {0,1}.
void baseline_update(AgentState& state, Arm played, int reward);

// sqrt(ln N / (t N)). Throws std::invalid_argument for t == 0 or N < 2.
double exp3_eta(std::uint64_t n_arms, std::uint64_t t);

// Index of the largest value, lowest index on ties. Thompson sampling picks
// first_argmax of its posterior draws.
Arm first_argmax(std::span<const double> values);

// Selection distribution of the next Exp3 step.
std::vector<double> exp3_probabilities(const Exp3State& state);

std::vector<double> softmax(std::span<const double> preferences);

double ucb1_index(const Ucb1State& state, Arm a);

// Exploration rate used at step `t` (t >= 1).
double epsilon_at(const EpsGreedyState& state, std::uint64_t t);

// Sample mean of an arm, 0 when unplayed.
double sample_mean(std::span<const double> sums,
                   std::span<const std::uint64_t> counts, Arm a);

}  // namespace samba
