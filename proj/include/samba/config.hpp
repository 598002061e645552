#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "samba/agent.hpp"
#include "samba/harness.hpp"
#include "samba/schedule.hpp"

namespace samba {

inline constexpr int kConfigSchemaVersion = 1;

// {"type":"fixed","alpha":0.1} | {"type":"log_cooling","beta":1.0}
// | {"type":"loglog_cooling","beta":1.0}
// | {"type":"slowly_varying","l":"inv_loglog","tol":1e-10}
// Cooling schedules accept "unvalidated": true to allow beta > 1.
// Throws ConfigError naming the key (prefixed with `path`).
Schedule parse_schedule(const nlohmann::json& j, const std::string& path = {});
nlohmann::json to_json(const Schedule& schedule);

// Baselines: {"type":"thompson"} | {"type":"ucb1"} | {"type":"exp3"}
// | {"type":"gba","alpha":0.1} | {"type":"eps_greedy","mode":"decaying"}
// | {"type":"eps_greedy","mode":"fixed","eps":0.1} | {"type":"uniform"}.
// SAMBA: a schedule object directly, or {"type":"samba","schedule":{...}}.
// Every agent accepts "name"; SAMBA also accepts "initial" (probabilities)
// and "floor".
AgentSpec parse_agent_spec(const nlohmann::json& j, const std::string& path = {});
nlohmann::json to_json(const AgentSpec& spec);

// One experiment object. Keys: name, instances ({"means": [[...], ...]} or
// {"generator": {"n_arms", "low", "high", "n_instances", "seed"}}), or the
// shorthand "means": [...]; agents; horizon; replications; seed; snapshots
// ({"log_points": n} or an explicit list); metrics (flags); sweep
// ({"agent": {...}, "key": "alpha", "values": [...]}, expanded into one
// agent per value).
ExperimentConfig parse_experiment(const nlohmann::json& j,
                                  const std::string& path = {});

// A config file: {"schema": 1, "experiments": [...]} or {"schema": 1, ...}
// with the experiment keys at top level. `seed_override` replaces every
// experiment's base seed.
std::vector<ExperimentConfig> parse_config(
    const nlohmann::json& j, std::optional<std::uint64_t> seed_override = {});

// Reads and parses a file; malformed JSON is a ConfigError.
std::vector<ExperimentConfig> load_config(
    const std::string& path, std::optional<std::uint64_t> seed_override = {});

// Sweep description of an experiment, if the source object had one.
struct SweepSpec {
  std::string key;
  std::vector<double> values;
  std::size_t first_agent = 0;  // index of the first expanded agent
};
std::optional<SweepSpec> parse_sweep(const nlohmann::json& experiment);

}  // namespace samba
