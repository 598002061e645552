#include "samba/agent.hpp"

#include <cstdio>

#include "samba/errors.hpp"

namespace samba {
namespace {

std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::vector<double> initial_probs(const SambaSpec& spec, std::size_t n) {
  if (spec.initial.empty()) return uniform_probs(n).vec();
  if (spec.initial.size() != n) {
    throw ConfigError("initial probabilities must have one entry per arm",
                      "initial");
  }
  try {
    return ProbVector(spec.initial).vec();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), "initial");
  }
}

AgentState make_baseline(const AgentKind& kind, std::size_t n) {
  struct {
    std::size_t n;
    AgentState operator()(const SambaSpec&) const { return UniformState{n}; }
    AgentState operator()(const ThompsonSpec&) const { return make_thompson(n); }
    AgentState operator()(const Ucb1Spec&) const { return make_ucb1(n); }
    AgentState operator()(const Exp3Spec&) const { return make_exp3(n); }
    AgentState operator()(const GbaSpec& s) const {
      return make_gba(n, s.step_size);
    }
    AgentState operator()(const EpsGreedySpec& s) const {
      return make_eps_greedy(n, s.mode, s.epsilon);
    }
    AgentState operator()(const UniformSpec&) const { return UniformState{n}; }
  } visitor{n};
  return std::visit(visitor, kind);
}

}  // namespace

std::string default_agent_name(const AgentKind& kind) {
  struct {
    std::string operator()(const SambaSpec& s) const {
      return s.schedule.label();
    }
    std::string operator()(const ThompsonSpec&) const { return "thompson"; }
    std::string operator()(const Ucb1Spec&) const { return "ucb1"; }
    std::string operator()(const Exp3Spec&) const { return "exp3"; }
    std::string operator()(const GbaSpec& s) const {
      return "gba(alpha=" + fmt_g(s.step_size) + ")";
    }
    std::string operator()(const EpsGreedySpec& s) const {
      return s.mode == EpsMode::Decaying ? "eps_greedy(decaying)"
                                         : "eps_greedy(eps=" + fmt_g(s.epsilon) + ")";
    }
    std::string operator()(const UniformSpec&) const { return "uniform"; }
  } visitor;
  return std::visit(visitor, kind);
}

AgentSpec make_agent_spec(AgentKind kind, std::string name) {
  if (name.empty()) name = default_agent_name(kind);
  return {std::move(name), std::move(kind)};
}

SambaAgent::SambaAgent(const SambaSpec& spec, std::size_t n_arms)
    : schedule_(spec.schedule),
      options_(spec.options),
      probs_(initial_probs(spec, n_arms)) {}

Arm SambaAgent::select(RngStream& rng) {
  leader_ = leading_arm(probs_, rng);
  return samba_select(probs_, rng);
}

void SambaAgent::update(Arm played, int reward) {
  samba_update_in_place(probs_, schedule_, leader_, played, reward, options_);
}

Agent::Agent(const AgentSpec& spec, std::size_t n_arms)
    : name_(spec.name.empty() ? default_agent_name(spec.kind) : spec.name),
      impl_(AgentState{UniformState{n_arms}}) {
  if (n_arms < 2) throw ConfigError("agents need at least 2 arms", "means");
  if (const auto* s = std::get_if<SambaSpec>(&spec.kind)) {
    impl_.emplace<SambaAgent>(*s, n_arms);
  } else {
    try {
      impl_.emplace<AgentState>(make_baseline(spec.kind, n_arms));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), "agents");
    }
  }
}

Arm Agent::select(RngStream& rng) {
  if (auto* s = std::get_if<SambaAgent>(&impl_)) return s->select(rng);
  return baseline_select(std::get<AgentState>(impl_), rng);
}

void Agent::update(Arm played, int reward) {
  if (auto* s = std::get_if<SambaAgent>(&impl_)) {
    s->update(played, reward);
  } else {
    baseline_update(std::get<AgentState>(impl_), played, reward);
  }
}

std::span<const double> Agent::samba_probs() const {
  if (const auto* s = std::get_if<SambaAgent>(&impl_)) return s->probs();
  return {};
}

}  // namespace samba
