#include "samba/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "samba/errors.hpp"

namespace samba {
namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& path) {
  if (!j.is_object()) throw ConfigError("expected a JSON object", path);
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!ok.contains(item.key())) {
      throw ConfigError("unknown key", join(path, item.key()));
    }
  }
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError("missing required key", join(path, key));
  return j.at(key);
}

double get_number(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) throw ConfigError("expected a number", join(path, key));
  return v.get<double>();
}

double get_number_or(const json& j, const char* key, double fallback,
                     const std::string& path) {
  return j.contains(key) ? get_number(j, key, path) : fallback;
}

std::uint64_t get_count(const json& j, const char* key,
                        const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError("expected a non-negative integer", join(path, key));
  }
  return v.get<std::uint64_t>();
}

std::string get_string(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_string()) throw ConfigError("expected a string", join(path, key));
  return v.get<std::string>();
}

bool get_bool_or(const json& j, const char* key, bool fallback,
                 const std::string& path) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) {
    throw ConfigError("expected true or false", join(path, key));
  }
  return j.at(key).get<bool>();
}

std::vector<double> get_number_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError("expected an array of numbers", path);
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError("expected a number", index(path, i));
    out.push_back(v[i].get<double>());
  }
  return out;
}

// `key` under `path`, unless it is already rooted there or names the last
// component of `path` itself.
std::string rebase(const std::string& path, const std::string& key) {
  if (path.empty()) return key;
  if (key.rfind(path, 0) == 0 &&
      (key.size() == path.size() || key[path.size()] == '.' || key[path.size()] == '[')) {
    return key;
  }
  if (path.size() > key.size() &&
      path.compare(path.size() - key.size(), key.size(), key) == 0 &&
      path[path.size() - key.size() - 1] == '.') {
    return path;
  }
  return join(path, key);
}

// Re-throws ConfigError from a factory with the key rooted at `path`.
template <typename F>
auto rooted(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError& e) {
    if (e.key().empty()) throw ConfigError(e.what(), path);
    const std::string prefix = e.key() + ": ";
    std::string msg = e.what();
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    throw ConfigError(msg, rebase(path, e.key()));
  }
}

bool is_schedule_type(const std::string& t) {
  return t == "fixed" || t == "log_cooling" || t == "loglog_cooling" ||
         t == "slowly_varying";
}

BanditInstance parse_instance(const json& v, const std::string& path) {
  const auto means = get_number_list(v, path);
  try {
    return BanditInstance(means);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), path);
  }
}

std::vector<BanditInstance> parse_instances(const json& j,
                                            const std::string& path) {
  check_keys(j, {"means", "generator"}, path);
  if (j.contains("means") == j.contains("generator")) {
    throw ConfigError("give exactly one of \"means\" or \"generator\"", path);
  }
  std::vector<BanditInstance> out;
  if (j.contains("means")) {
    const json& list = j.at("means");
    const std::string p = join(path, "means");
    if (!list.is_array() || list.empty()) {
      throw ConfigError("expected a non-empty array of mean lists", p);
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      out.push_back(parse_instance(list[i], index(p, i)));
    }
    return out;
  }
  const json& g = j.at("generator");
  const std::string p = join(path, "generator");
  check_keys(g, {"n_arms", "low", "high", "n_instances", "seed"}, p);
  return rooted(p, [&] {
    return generate_instances(get_count(g, "n_arms", p),
                              get_number(g, "low", p), get_number(g, "high", p),
                              get_count(g, "n_instances", p),
                              g.contains("seed") ? get_count(g, "seed", p) : 0);
  });
}

std::vector<std::uint64_t> parse_snapshots(const json& j, std::uint64_t horizon,
                                           const std::string& path) {
  if (j.is_array()) {
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number_integer() || j[i].get<std::int64_t>() < 1) {
        throw ConfigError("expected a positive integer", index(path, i));
      }
      out.push_back(j[i].get<std::uint64_t>());
    }
    return out;
  }
  check_keys(j, {"log_points"}, path);
  const auto n = get_count(j, "log_points", path);
  if (n < 1) throw ConfigError("must be >= 1", join(path, "log_points"));
  if (horizon < 1) return {};
  return snapshot_grid(horizon, n);
}

MetricsFlags parse_metrics(const json& j, const std::string& path) {
  check_keys(j, {"pseudo_regret", "realized_regret", "p_optimal", "suboptimal_play"},
             path);
  MetricsFlags m;
  m.pseudo_regret = get_bool_or(j, "pseudo_regret", true, path);
  m.realized_regret = get_bool_or(j, "realized_regret", true, path);
  m.p_optimal = get_bool_or(j, "p_optimal", true, path);
  m.suboptimal_play = get_bool_or(j, "suboptimal_play", true, path);
  return m;
}

std::vector<AgentSpec> expand_sweep(const json& sweep, const std::string& path) {
  check_keys(sweep, {"agent", "key", "values"}, path);
  const json& base = require(sweep, "agent", path);
  const std::string key = get_string(sweep, "key", path);
  const auto values = get_number_list(require(sweep, "values", path),
                                      join(path, "values"));
  if (values.empty()) throw ConfigError("needs at least one value", join(path, "values"));
  std::vector<AgentSpec> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    json agent = base;
    if (agent.contains("schedule") && agent.at("schedule").contains(key)) {
      agent["schedule"][key] = values[i];
    } else {
      agent[key] = values[i];
    }
    agent.erase("name");
    out.push_back(parse_agent_spec(agent, index(join(path, "values"), i)));
  }
  return out;
}

}  // namespace

Schedule parse_schedule(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError("expected a schedule object", path);
  const std::string type = get_string(j, "type", path);
  return rooted(path, [&]() -> Schedule {
    if (type == "fixed") {
      check_keys(j, {"type", "alpha", "name", "initial", "floor"}, path);
      return Schedule::fixed(get_number(j, "alpha", path));
    }
    if (type == "log_cooling" || type == "loglog_cooling") {
      check_keys(j, {"type", "beta", "unvalidated", "name", "initial", "floor"},
                 path);
      const double beta = get_number(j, "beta", path);
      const bool unvalidated = get_bool_or(j, "unvalidated", false, path);
      return type == "log_cooling" ? Schedule::log_cooling(beta, unvalidated)
                                   : Schedule::loglog_cooling(beta, unvalidated);
    }
    if (type == "slowly_varying") {
      check_keys(j, {"type", "l", "tol", "name", "initial", "floor"}, path);
      return Schedule::slowly_varying(get_string(j, "l", path),
                                      get_number_or(j, "tol", 1e-10, path));
    }
    throw ConfigError("unknown schedule type '" + type + "'", "type");
  });
}

json to_json(const Schedule& s) {
  switch (s.kind()) {
    case ScheduleKind::Fixed:
      return {{"type", "fixed"}, {"alpha", s.parameter()}};
    case ScheduleKind::LogCooling:
    case ScheduleKind::LogLogCooling: {
      json j = {{"type", s.kind() == ScheduleKind::LogCooling ? "log_cooling"
                                                              : "loglog_cooling"},
                {"beta", s.parameter()}};
      if (s.unvalidated()) j["unvalidated"] = true;
      return j;
    }
    case ScheduleKind::SlowlyVarying:
      return {{"type", "slowly_varying"}, {"l", s.l_name()}, {"tol", s.tolerance()}};
  }
  return {};
}

AgentSpec parse_agent_spec(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError("expected an agent object", path);
  const std::string type = get_string(j, "type", path);
  std::string name;
  if (j.contains("name")) name = get_string(j, "name", path);

  if (type == "samba" || is_schedule_type(type)) {
    SambaSpec spec{type == "samba"
                       ? parse_schedule(require(j, "schedule", path),
                                        join(path, "schedule"))
                       : parse_schedule(j, path),
                   {},
                   {}};
    if (type == "samba") {
      check_keys(j, {"type", "schedule", "name", "initial", "floor"}, path);
    }
    if (j.contains("initial")) {
      spec.initial = get_number_list(j.at("initial"), join(path, "initial"));
    }
    if (j.contains("floor")) {
      const double f = get_number(j, "floor", path);
      if (!(f > 0.0 && f < 0.5)) {
        throw ConfigError("floor must lie in (0, 0.5)", join(path, "floor"));
      }
      spec.options.floor = f;
    }
    return make_agent_spec(std::move(spec), name);
  }
  if (type == "thompson" || type == "ucb1" || type == "exp3" ||
      type == "uniform") {
    check_keys(j, {"type", "name"}, path);
    if (type == "thompson") return make_agent_spec(ThompsonSpec{}, name);
    if (type == "ucb1") return make_agent_spec(Ucb1Spec{}, name);
    if (type == "exp3") return make_agent_spec(Exp3Spec{}, name);
    return make_agent_spec(UniformSpec{}, name);
  }
  if (type == "gba") {
    check_keys(j, {"type", "name", "alpha"}, path);
    const double alpha = get_number_or(j, "alpha", 0.1, path);
    if (!(alpha > 0.0)) throw ConfigError("must be > 0", join(path, "alpha"));
    return make_agent_spec(GbaSpec{alpha}, name);
  }
  if (type == "eps_greedy") {
    check_keys(j, {"type", "name", "mode", "eps"}, path);
    const std::string mode = get_string(j, "mode", path);
    if (mode == "decaying") {
      return make_agent_spec(EpsGreedySpec{EpsMode::Decaying, 0.0}, name);
    }
    if (mode == "fixed") {
      const double eps = get_number(j, "eps", path);
      if (!(eps >= 0.0 && eps <= 1.0)) {
        throw ConfigError("must lie in [0,1]", join(path, "eps"));
      }
      return make_agent_spec(EpsGreedySpec{EpsMode::Fixed, eps}, name);
    }
    throw ConfigError("expected \"decaying\" or \"fixed\"", join(path, "mode"));
  }
  throw ConfigError("unknown agent type '" + type + "'", join(path, "type"));
}

json to_json(const AgentSpec& spec) {
  struct {
    json operator()(const SambaSpec& s) const {
      json j = {{"type", "samba"}, {"schedule", to_json(s.schedule)}};
      if (!s.initial.empty()) j["initial"] = s.initial;
      if (s.options.floor) j["floor"] = *s.options.floor;
      return j;
    }
    json operator()(const ThompsonSpec&) const { return {{"type", "thompson"}}; }
    json operator()(const Ucb1Spec&) const { return {{"type", "ucb1"}}; }
    json operator()(const Exp3Spec&) const { return {{"type", "exp3"}}; }
    json operator()(const GbaSpec& s) const {
      return {{"type", "gba"}, {"alpha", s.step_size}};
    }
    json operator()(const EpsGreedySpec& s) const {
      if (s.mode == EpsMode::Decaying) {
        return {{"type", "eps_greedy"}, {"mode", "decaying"}};
      }
      return {{"type", "eps_greedy"}, {"mode", "fixed"}, {"eps", s.epsilon}};
    }
    json operator()(const UniformSpec&) const { return {{"type", "uniform"}}; }
  } visitor;
  json j = std::visit(visitor, spec.kind);
  j["name"] = spec.name;
  return j;
}

ExperimentConfig parse_experiment(const json& j, const std::string& path) {
  check_keys(j,
             {"name", "instances", "means", "agents", "horizon", "replications",
              "seed", "snapshots", "metrics", "sweep", "schema"},
             path);
  ExperimentConfig c;
  if (j.contains("name")) c.name = get_string(j, "name", path);
  if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos) {
    throw ConfigError("must be a non-empty file-name-safe string",
                      join(path, "name"));
  }
  if (j.contains("means") == j.contains("instances")) {
    throw ConfigError("give exactly one of \"instances\" or \"means\"", path);
  }
  if (j.contains("means")) {
    c.instances.push_back(parse_instance(j.at("means"), join(path, "means")));
  } else {
    c.instances = parse_instances(j.at("instances"), join(path, "instances"));
  }

  if (j.contains("agents")) {
    const json& agents = j.at("agents");
    const std::string p = join(path, "agents");
    if (!agents.is_array()) throw ConfigError("expected an array", p);
    for (std::size_t i = 0; i < agents.size(); ++i) {
      c.agents.push_back(parse_agent_spec(agents[i], index(p, i)));
    }
  }
  if (j.contains("sweep")) {
    auto swept = expand_sweep(j.at("sweep"), join(path, "sweep"));
    c.agents.insert(c.agents.end(), swept.begin(), swept.end());
  }
  if (c.agents.empty()) {
    throw ConfigError("at least one agent is required", join(path, "agents"));
  }

  c.horizon = get_count(j, "horizon", path);
  if (c.horizon < 1) throw ConfigError("must be >= 1", join(path, "horizon"));
  c.replications = get_count(j, "replications", path);
  if (c.replications < 1) {
    throw ConfigError("must be >= 1", join(path, "replications"));
  }
  c.base_seed = j.contains("seed") ? get_count(j, "seed", path) : 0;
  c.snapshots = j.contains("snapshots")
                    ? parse_snapshots(j.at("snapshots"), c.horizon,
                                      join(path, "snapshots"))
                    : snapshot_grid(c.horizon, 20);
  if (j.contains("metrics")) c.metrics = parse_metrics(j.at("metrics"), join(path, "metrics"));

  rooted(path, [&] {
    validate(c);
    return 0;
  });
  // Agents that cannot run on these instances (wrong initial length, ...).
  for (std::size_t a = 0; a < c.agents.size(); ++a) {
    rooted(index(join(path, "agents"), a), [&] {
      for (const auto& inst : c.instances) Agent(c.agents[a], inst.num_arms());
      return 0;
    });
  }
  return c;
}

std::vector<ExperimentConfig> parse_config(
    const json& j, std::optional<std::uint64_t> seed_override) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("schema")) throw ConfigError("missing required key", "schema");
  if (!j.at("schema").is_number_integer() ||
      j.at("schema").get<int>() != kConfigSchemaVersion) {
    throw ConfigError("unsupported schema version (expected " +
                          std::to_string(kConfigSchemaVersion) + ")",
                      "schema");
  }
  std::vector<ExperimentConfig> out;
  if (j.contains("experiments")) {
    for (const auto& item : j.items()) {
      if (item.key() != "schema" && item.key() != "experiments") {
        throw ConfigError("unknown key", item.key());
      }
    }
    const json& list = j.at("experiments");
    if (!list.is_array() || list.empty()) {
      throw ConfigError("expected a non-empty array", "experiments");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      out.push_back(parse_experiment(list[i], index("experiments", i)));
    }
  } else {
    out.push_back(parse_experiment(j));
  }
  std::set<std::string> names;
  for (auto& c : out) {
    if (!names.insert(c.name).second) {
      throw ConfigError("duplicate experiment name '" + c.name + "'", "name");
    }
    if (seed_override) c.base_seed = *seed_override;
  }
  return out;
}

std::vector<ExperimentConfig> load_config(
    const std::string& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", "config");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(), "config");
  }
  return parse_config(j, seed_override);
}

std::optional<SweepSpec> parse_sweep(const json& experiment) {
  if (!experiment.contains("sweep")) return std::nullopt;
  const json& s = experiment.at("sweep");
  SweepSpec out;
  out.key = get_string(s, "key", "sweep");
  out.values = get_number_list(require(s, "values", "sweep"), "sweep.values");
  out.first_agent =
      experiment.contains("agents") ? experiment.at("agents").size() : 0;
  return out;
}

}  // namespace samba
