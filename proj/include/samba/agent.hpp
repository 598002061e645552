#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "samba/baselines.hpp"
#include "samba/policy.hpp"
#include "samba/schedule.hpp"

namespace samba {

struct SambaSpec {
  Schedule schedule;
  // Initial probabilities; uniform when empty.
  std::vector<double> initial;
  UpdateOptions options;
};
struct ThompsonSpec {};
struct Ucb1Spec {};
struct Exp3Spec {};
struct GbaSpec {
  double step_size = 0.1;
};
struct EpsGreedySpec {
  EpsMode mode = EpsMode::Decaying;
  double epsilon = 0.0;
};
struct UniformSpec {};

using AgentKind = std::variant<SambaSpec, ThompsonSpec, Ucb1Spec, Exp3Spec,
                               GbaSpec, EpsGreedySpec, UniformSpec>;

struct AgentSpec {
  std::string name;
  AgentKind kind;
};

// Display name derived from the parameters, e.g. "samba(alpha=0.1)",
// "eps_greedy(decaying)".
std::string default_agent_name(const AgentKind& kind);

AgentSpec make_agent_spec(AgentKind kind, std::string name = {});

// SAMBA agent: leader and played arm are both drawn at select time so the
// update sees the leader of the state the arm was drawn from.
class SambaAgent {
 public:
  SambaAgent(const SambaSpec& spec, std::size_t n_arms);

  Arm select(RngStream& rng);
  void update(Arm played, int reward);

  std::span<const double> probs() const { return probs_; }
  const Schedule& schedule() const { return schedule_; }
  Arm last_leader() const { return leader_; }

 private:
  Schedule schedule_;
  UpdateOptions options_;
  std::vector<double> probs_;
  Arm leader_ = 0;
};

// Any agent behind one select/update contract.
class Agent {
 public:
  // Throws ConfigError when the spec cannot be instantiated for n_arms.
  Agent(const AgentSpec& spec, std::size_t n_arms);

  Arm select(RngStream& rng);
  void update(Arm played, int reward);

  const std::string& name() const { return name_; }
  bool is_samba() const { return std::holds_alternative<SambaAgent>(impl_); }
  // SAMBA probabilities; empty for other agents.
  std::span<const double> samba_probs() const;
  const AgentState* baseline_state() const {
    return std::get_if<AgentState>(&impl_);
  }

 private:
  std::string name_;
  std::variant<SambaAgent, AgentState> impl_;
};

}  // namespace samba
