#include "samba/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace samba {
namespace {

void check_arm(std::size_t n, Arm a) {
  if (a >= n) throw std::out_of_range("baseline_update: arm out of range");
}

Arm sample_categorical(std::span<const double> probs, RngStream& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (Arm a = 0; a < probs.size(); ++a) {
    acc += probs[a];
    if (u < acc) return a;
  }
  // Rounding left u above the running total; fall back to the last arm with
  // mass.
  for (Arm a = probs.size(); a-- > 0;) {
    if (probs[a] > 0.0) return a;
  }
  return 0;
}

// Lowest index on ties.
template <typename F>
Arm argmax_by(std::size_t n, F&& value) {
  Arm best = 0;
  double best_v = value(0);
  for (Arm a = 1; a < n; ++a) {
    const double v = value(a);
    if (v > best_v) {
      best = a;
      best_v = v;
    }
  }
  return best;
}

double beta_sample(double a, double b, RngStream& rng) {
  const double x = std::gamma_distribution<double>(a, 1.0)(rng);
  const double y = std::gamma_distribution<double>(b, 1.0)(rng);
  return x / (x + y);
}

struct Selector {
  RngStream& rng;

  Arm operator()(const ThompsonState& s) const {
    const std::size_t n = s.successes_plus_one.size();
    std::vector<double> theta(n);
    for (Arm a = 0; a < n; ++a) {
      theta[a] = beta_sample(s.successes_plus_one[a], s.failures_plus_one[a], rng);
    }
    return first_argmax(theta);
  }

  Arm operator()(const Ucb1State& s) const {
    const std::size_t n = s.counts.size();
    for (Arm a = 0; a < n; ++a) {
      if (s.counts[a] == 0) return a;
    }
    return argmax_by(n, [&](Arm a) { return ucb1_index(s, a); });
  }

  Arm operator()(const Exp3State& s) const {
    return sample_categorical(exp3_probabilities(s), rng);
  }

  Arm operator()(const GbaState& s) const {
    return sample_categorical(softmax(s.preferences), rng);
  }

  Arm operator()(const EpsGreedyState& s) const {
    const std::size_t n = s.counts.size();
    const double eps = epsilon_at(s, s.t + 1);
    if (eps > 0.0 && rng.uniform() < eps) return rng.below(n);
    return argmax_by(
        n, [&](Arm a) { return sample_mean(s.reward_sums, s.counts, a); });
  }

  Arm operator()(const UniformState& s) const { return rng.below(s.n_arms); }
};

struct Updater {
  Arm played;
  int reward;

  void operator()(ThompsonState& s) const {
    check_arm(s.successes_plus_one.size(), played);
    s.successes_plus_one[played] += reward;
    s.failures_plus_one[played] += 1 - reward;
  }

  void operator()(Ucb1State& s) const {
    check_arm(s.counts.size(), played);
    ++s.counts[played];
    s.reward_sums[played] += reward;
    ++s.t;
  }

  void operator()(Exp3State& s) const {
    check_arm(s.gain_estimates.size(), played);
    const std::vector<double> probs = exp3_probabilities(s);
    s.gain_estimates[played] += reward / probs[played];
    ++s.t;
  }

  void operator()(GbaState& s) const {
    check_arm(s.preferences.size(), played);
    const std::vector<double> pi = softmax(s.preferences);
    const double advantage = reward - s.mean_reward;
    for (Arm a = 0; a < pi.size(); ++a) {
      const double indicator = a == played ? 1.0 : 0.0;
      s.preferences[a] += s.step_size * advantage * (indicator - pi[a]);
    }
    ++s.steps;
    s.mean_reward += (reward - s.mean_reward) / static_cast<double>(s.steps);
  }

  void operator()(EpsGreedyState& s) const {
    check_arm(s.counts.size(), played);
    ++s.counts[played];
    s.reward_sums[played] += reward;
    ++s.t;
  }

  void operator()(UniformState& s) const { check_arm(s.n_arms, played); }
};

void check_n(std::size_t n) {
  if (n < 2) throw std::invalid_argument("agent needs at least 2 arms");
}

}  // namespace

ThompsonState make_thompson(std::size_t n_arms) {
  check_n(n_arms);
  return {std::vector<double>(n_arms, 1.0), std::vector<double>(n_arms, 1.0)};
}

Ucb1State make_ucb1(std::size_t n_arms) {
  check_n(n_arms);
  return {std::vector<std::uint64_t>(n_arms, 0), std::vector<double>(n_arms, 0.0),
          0};
}

Exp3State make_exp3(std::size_t n_arms) {
  check_n(n_arms);
  return {std::vector<double>(n_arms, 0.0), 0};
}

GbaState make_gba(std::size_t n_arms, double step_size) {
  check_n(n_arms);
  if (!(step_size > 0.0)) {
    throw std::invalid_argument("gradient bandit step size must be > 0");
  }
  return {std::vector<double>(n_arms, 0.0), 0.0, 0, step_size};
}

EpsGreedyState make_eps_greedy(std::size_t n_arms, EpsMode mode,
                               double epsilon) {
  check_n(n_arms);
  if (mode == EpsMode::Fixed && !(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0,1]");
  }
  return {std::vector<double>(n_arms, 0.0), std::vector<std::uint64_t>(n_arms, 0),
          0, mode, epsilon};
}

std::size_t num_arms(const AgentState& state) {
  struct {
    std::size_t operator()(const ThompsonState& s) const {
      return s.successes_plus_one.size();
    }
    std::size_t operator()(const Ucb1State& s) const { return s.counts.size(); }
    std::size_t operator()(const Exp3State& s) const {
      return s.gain_estimates.size();
    }
    std::size_t operator()(const GbaState& s) const {
      return s.preferences.size();
    }
    std::size_t operator()(const EpsGreedyState& s) const {
      return s.counts.size();
    }
    std::size_t operator()(const UniformState& s) const { return s.n_arms; }
  } visitor;
  return std::visit(visitor, state);
}

Arm baseline_select(const AgentState& state, RngStream& rng) {
  return std::visit(Selector{rng}, state);
}

void baseline_update(AgentState& state, Arm played, int reward) {
  if (reward != 0 && reward != 1) {
    throw std::invalid_argument("baseline_update: reward must be 0 or 1");
  }
  std::visit(Updater{played, reward}, state);
}

Arm first_argmax(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of an empty span");
  return argmax_by(values.size(), [&](Arm a) { return values[a]; });
}

double exp3_eta(std::uint64_t n_arms, std::uint64_t t) {
  if (n_arms < 2) throw std::invalid_argument("exp3_eta: need N >= 2");
  if (t == 0) throw std::invalid_argument("exp3_eta: t must be >= 1");
  const double n = static_cast<double>(n_arms);
  return std::sqrt(std::log(n) / (static_cast<double>(t) * n));
}

std::vector<double> exp3_probabilities(const Exp3State& state) {
  const double eta = exp3_eta(state.gain_estimates.size(), state.t + 1);
  std::vector<double> scaled(state.gain_estimates.size());
  for (std::size_t a = 0; a < scaled.size(); ++a) {
    scaled[a] = eta * state.gain_estimates[a];
  }
  return softmax(scaled);
}

std::vector<double> softmax(std::span<const double> preferences) {
  std::vector<double> out(preferences.begin(), preferences.end());
  if (out.empty()) return out;
  const double top = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

double ucb1_index(const Ucb1State& state, Arm a) {
  const double n = static_cast<double>(state.counts.at(a));
  const double mean = state.reward_sums[a] / n;
  return mean +
         std::sqrt(2.0 * std::log(static_cast<double>(state.t)) / n);
}

double epsilon_at(const EpsGreedyState& state, std::uint64_t t) {
  if (state.mode == EpsMode::Fixed) return state.epsilon;
  if (t == 0) throw std::invalid_argument("epsilon_at: t counts from 1");
  return std::min(1.0, 100.0 / static_cast<double>(t));
}

double sample_mean(std::span<const double> sums,
                   std::span<const std::uint64_t> counts, Arm a) {
  return counts[a] == 0 ? 0.0 : sums[a] / static_cast<double>(counts[a]);
}

}  // namespace samba
