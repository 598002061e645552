#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "samba/config.hpp"
#include "samba/errors.hpp"

using namespace samba;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "schema": 1,
    "name": "demo",
    "means": [0.1, 0.5, 0.8, 0.9],
    "agents": [{"type": "fixed", "alpha": 0.1}, {"type": "thompson"}],
    "horizon": 100,
    "replications": 5
  })");
}

std::string key_of(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  const auto cs = parse_config(minimal());
  REQUIRE(cs.size() == 1);
  const auto& c = cs[0];
  CHECK(c.name == "demo");
  CHECK(c.instances.size() == 1);
  CHECK(c.agents.size() == 2);
  CHECK(c.agents[0].name == "samba(alpha=0.1)");
  CHECK(c.agents[1].name == "thompson");
  CHECK(c.horizon == 100);
  CHECK(c.replications == 5);
  CHECK(c.base_seed == 0);
  CHECK(c.snapshots == snapshot_grid(100, 20));
}

TEST_CASE("seed override replaces every base seed") {
  auto j = minimal();
  j["seed"] = 3;
  CHECK(parse_config(j)[0].base_seed == 3);
  CHECK(parse_config(j, 77)[0].base_seed == 77);
}

TEST_CASE("every schedule and agent type round-trips through json") {
  const char* specs[] = {
      R"({"type":"fixed","alpha":0.1})",
      R"({"type":"log_cooling","beta":1.0})",
      R"({"type":"loglog_cooling","beta":0.5})",
      R"({"type":"slowly_varying","l":"inv_loglog","tol":1e-9})",
      R"({"type":"samba","schedule":{"type":"fixed","alpha":0.2},"initial":[0.5,0.3,0.2]})",
      R"({"type":"thompson"})",
      R"({"type":"ucb1"})",
      R"({"type":"exp3"})",
      R"({"type":"gba","alpha":0.1})",
      R"({"type":"eps_greedy","mode":"decaying"})",
      R"({"type":"eps_greedy","mode":"fixed","eps":0.1})",
      R"({"type":"uniform","name":"random"})",
  };
  for (const char* s : specs) {
    CAPTURE(s);
    const auto a = parse_agent_spec(json::parse(s));
    const auto b = parse_agent_spec(to_json(a));
    CHECK(a.name == b.name);
    CHECK(a.kind.index() == b.kind.index());
    CHECK(to_json(a) == to_json(b));
  }
}

TEST_CASE("schedule parsing") {
  const auto s = parse_schedule(json::parse(R"({"type":"log_cooling","beta":0.5})"));
  CHECK(s.kind() == ScheduleKind::LogCooling);
  CHECK(s.parameter() == 0.5);
  CHECK(to_json(s)["beta"] == 0.5);
  const auto u = parse_schedule(
      json::parse(R"({"type":"log_cooling","beta":1.5,"unvalidated":true})"));
  CHECK(u.unvalidated());
  CHECK_THROWS_AS(parse_schedule(json::parse(R"({"type":"log_cooling","beta":1.5})")),
                  ConfigError);
}

TEST_CASE("alpha at or above one is rejected with the admissibility message") {
  try {
    parse_agent_spec(json::parse(R"({"type":"fixed","alpha":1.5})"), "agents[0]");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "agents[0].alpha");
    CHECK(std::string(e.what()).find("admissibility") != std::string::npos);
  }
}

TEST_CASE("errors name the offending key") {
  auto j = minimal();
  j["horizon"] = 0;
  CHECK(key_of(j) == "horizon");

  j = minimal();
  j["replications"] = -1;
  CHECK(key_of(j) == "replications");

  j = minimal();
  j["agents"][1]["type"] = "oracle";
  CHECK(key_of(j) == "agents[1].type");

  j = minimal();
  j["agents"][0]["alpha"] = 2.0;
  CHECK(key_of(j) == "agents[0].alpha");

  j = minimal();
  j["agents"][0]["aplha"] = 0.1;
  CHECK(key_of(j) == "agents[0].aplha");

  j = minimal();
  j["means"] = json::array({0.5, 1.5});
  CHECK(key_of(j) == "means");

  j = minimal();
  j["snapshots"] = json::array({10, 500});
  CHECK(key_of(j) == "snapshots");

  j = minimal();
  j["schema"] = 2;
  CHECK(key_of(j) == "schema");

  j = minimal();
  j.erase("schema");
  CHECK(key_of(j) == "schema");

  j = minimal();
  j["colour"] = "blue";
  CHECK(key_of(j) == "colour");

  j = minimal();
  j["name"] = "a/b";
  CHECK(key_of(j) == "name");

  j = minimal();
  j["agents"][0]["initial"] = json::array({0.5, 0.5});
  CHECK(key_of(j) == "agents[0].initial");

  j = minimal();
  j["agents"][0]["floor"] = 0.7;
  CHECK(key_of(j) == "agents[0].floor");
}

TEST_CASE("multi-experiment files and duplicate names") {
  json j;
  j["schema"] = 1;
  auto a = minimal();
  a.erase("schema");
  auto b = a;
  b["name"] = "other";
  b["seed"] = 9;
  j["experiments"] = json::array({a, b});
  const auto cs = parse_config(j);
  REQUIRE(cs.size() == 2);
  CHECK(cs[1].base_seed == 9);

  j["experiments"][1]["name"] = "demo";
  CHECK(key_of(j) == "name");

  j["experiments"][1]["name"] = "other";
  j["experiments"][1]["horizon"] = 0;
  CHECK(key_of(j) == "experiments[1].horizon");
}

TEST_CASE("instance generator and explicit snapshots") {
  auto j = minimal();
  j.erase("means");
  j["instances"] = json::parse(
      R"({"generator":{"n_arms":10,"low":0.0,"high":0.1,"n_instances":4,"seed":3}})");
  j["snapshots"] = json::array({1, 50, 100});
  const auto c = parse_config(j)[0];
  CHECK(c.instances.size() == 4);
  CHECK(c.instances[0].num_arms() == 10);
  CHECK(c.snapshots == std::vector<std::uint64_t>{1, 50, 100});

  j["instances"]["generator"]["low"] = 0.2;
  CHECK(key_of(j) == "instances.generator");

  j = minimal();
  j["snapshots"] = json::parse(R"({"log_points": 3})");
  CHECK(parse_config(j)[0].snapshots == std::vector<std::uint64_t>{1, 10, 100});
}

TEST_CASE("sweep expands one agent per value") {
  auto j = minimal();
  j["sweep"] = json::parse(
      R"({"agent":{"type":"fixed","alpha":0.1},"key":"alpha","values":[0.5,0.1,0.01]})");
  const auto c = parse_config(j)[0];
  REQUIRE(c.agents.size() == 5);
  CHECK(c.agents[2].name == "samba(alpha=0.5)");
  CHECK(c.agents[4].name == "samba(alpha=0.01)");
  const auto s = parse_sweep(j);
  REQUIRE(s.has_value());
  CHECK(s->key == "alpha");
  CHECK(s->first_agent == 2);
  CHECK(s->values == std::vector<double>{0.5, 0.1, 0.01});

  j["sweep"]["values"] = json::array({0.5, 1.5});
  CHECK(key_of(j) == "sweep.values[1].alpha");
}

TEST_CASE("metrics flags") {
  auto j = minimal();
  j["metrics"] = json::parse(R"({"realized_regret": false})");
  const auto c = parse_config(j)[0];
  CHECK_FALSE(c.metrics.realized_regret);
  CHECK(c.metrics.pseudo_regret);
  j["metrics"]["p_optimal"] = "yes";
  CHECK(key_of(j) == "metrics.p_optimal");
}

TEST_CASE("load_config reports malformed JSON and missing files") {
  const auto dir = std::filesystem::temp_directory_path() / "samba_config_test";
  std::filesystem::create_directories(dir);
  const auto bad = dir / "bad.json";
  std::ofstream(bad) << "{\"schema\": 1,";
  try {
    load_config(bad.string());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "config");
  }
  CHECK_THROWS_AS(load_config((dir / "missing.json").string()), ConfigError);

  const auto good = dir / "good.json";
  std::ofstream(good) << minimal().dump();
  CHECK(load_config(good.string()).size() == 1);
  std::filesystem::remove_all(dir);
}
