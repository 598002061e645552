// samba: run bandit experiments, verification suites, sweeps and figure
// presets.
//
//   samba run    --config exp.json --out results/
//   samba sweep  --config sweep.json --out results/
//   samba fig    fig3 --out figs/ --scale 0.1
//   samba verify lemmas --out reports/
//
// Exit status: 0 success, 1 runtime or check failure, 2 usage or config
// error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "samba/config.hpp"
#include "samba/errors.hpp"
#include "samba/figures.hpp"
#include "samba/harness.hpp"
#include "samba/verify.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  double scale = 1.0;
  std::string name;  // figure preset or verify suite
};

unsigned resolve_jobs(const Options& o) {
  if (o.jobs) return *o.jobs;
  if (const char* env = std::getenv("SAMBA_JOBS")) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(env, &used);
      if (used == std::string(env).size()) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw samba::ConfigError("expected a non-negative integer", "SAMBA_JOBS");
  }
  return 1;
}

fs::path prepare_out(const Options& o) {
  const fs::path out(o.out);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) {
    throw samba::ConfigError("cannot create output directory '" + o.out + "'",
                             "out");
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

void require_config(const Options& o) {
  if (o.config.empty()) throw samba::ConfigError("is required", "--config");
  if (!fs::exists(o.config)) {
    throw samba::ConfigError("file not found: " + o.config, "--config");
  }
}

int cmd_run(const Options& o) {
  require_config(o);
  const auto experiments = samba::load_config(o.config, o.seed);
  const unsigned jobs = resolve_jobs(o);
  const fs::path out = prepare_out(o);
  for (const auto& exp : experiments) {
    const samba::MetricsTable table = samba::run_experiment(exp, jobs);
    const fs::path csv = out / (exp.name + ".csv");
    std::ofstream f(csv, std::ios::binary);
    samba::write_csv(f, table);
    if (!f) throw std::runtime_error("cannot write " + csv.string());
    std::cout << "wrote " << csv.string() << " (" << table.rows.size()
              << " rows)\n";
  }
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  require_config(o);
  nlohmann::json raw;
  {
    std::ifstream in(o.config);
    try {
      raw = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw samba::ConfigError(std::string("malformed JSON: ") + e.what(),
                               "config");
    }
  }
  const auto experiments = samba::parse_config(raw, o.seed);
  std::vector<nlohmann::json> sources;
  if (raw.contains("experiments")) {
    for (const auto& e : raw.at("experiments")) sources.push_back(e);
  } else {
    sources.push_back(raw);
  }
  const unsigned jobs = resolve_jobs(o);
  const fs::path out = prepare_out(o);
  bool any_sweep = false;
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    const auto& exp = experiments[i];
    const auto sweep = samba::parse_sweep(sources[i]);
    if (!sweep) continue;
    any_sweep = true;
    const samba::MetricsTable table = samba::run_experiment(exp, jobs);
    const fs::path csv = out / (exp.name + ".csv");
    {
      std::ofstream f(csv, std::ios::binary);
      samba::write_csv(f, table);
    }
    // Final-time summary: one row per swept value and instance.
    const fs::path summary = out / (exp.name + "_sweep.csv");
    std::ofstream s(summary, std::ios::binary);
    s << samba::csv_field(sweep->key)
      << ",agent,instance,pseudo_regret_mean,pseudo_regret_se,"
         "realized_regret_mean,p_optimal_mean\n";
    for (std::size_t k = 0; k < sweep->values.size(); ++k) {
      const auto& spec = exp.agents[sweep->first_agent + k];
      const std::string agent =
          spec.name.empty() ? samba::default_agent_name(spec.kind) : spec.name;
      for (std::size_t inst = 0; inst < exp.instances.size(); ++inst) {
        const auto rows = table.select(agent, inst);
        const auto& r = rows.back();
        s << samba::format_float(sweep->values[k]) << ','
          << samba::csv_field(agent) << ',' << inst << ','
          << samba::format_float(r.pseudo_regret_mean) << ','
          << samba::format_float(r.pseudo_regret_se) << ','
          << samba::format_float(r.realized_regret_mean) << ','
          << samba::format_float(r.p_optimal_mean) << '\n';
      }
    }
    if (!s) throw std::runtime_error("cannot write " + summary.string());
    std::cout << "wrote " << csv.string() << " and " << summary.string()
              << '\n';
  }
  if (!any_sweep) {
    throw samba::ConfigError("no experiment has a \"sweep\" entry", "sweep");
  }
  return kExitOk;
}

int cmd_fig(const Options& o) {
  const std::uint64_t seed = o.seed.value_or(0);
  const unsigned jobs = resolve_jobs(o);
  const auto& names = samba::figure_names();
  if (std::find(names.begin(), names.end(), o.name) == names.end()) {
    throw samba::ConfigError("unknown figure preset '" + o.name + "'", "figure");
  }
  samba::scaled_count(1, o.scale);
  const fs::path out = prepare_out(o);
  for (const auto& p : samba::run_figure(o.name, o.scale, seed, jobs, out)) {
    std::cout << "wrote " << p.string() << '\n';
  }
  return kExitOk;
}

int cmd_verify(const Options& o) {
  samba::VerifyOptions vo;
  vo.seed = o.seed.value_or(0);
  vo.jobs = resolve_jobs(o);
  vo.scale = o.scale;
  samba::scaled_count(1, o.scale);
  if (o.name != "lemmas" && o.name != "drift" && o.name != "embedded" &&
      o.name != "all") {
    throw samba::ConfigError("unknown suite '" + o.name + "'", "suite");
  }
  const fs::path out = prepare_out(o);
  const samba::Report report = samba::run_verify_suite(o.name, vo);
  const std::string text = report.to_text();
  std::cout << text;
  write_file(out / ("verify_" + o.name + ".txt"), text);
  write_file(out / ("verify_" + o.name + ".json"),
             report.to_json().dump(2) + "\n");
  if (report.has_inconclusive()) {
    std::cerr << "warning: some checks are inconclusive (too few "
                 "replications); they do not count as failures\n";
  }
  if (!report.passed()) {
    std::cerr << "verify " << o.name << ": FAILED\n";
    return kExitFailure;
  }
  std::cout << "verify " << o.name << ": ok\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAMBA multi-armed bandit experiments and verification"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", o.seed, "Base seed override");
    sub->add_option("--jobs", o.jobs,
                    "Worker threads (0 = all cores; default $SAMBA_JOBS or 1)");
  };

  auto* run = app.add_subcommand("run", "Run experiments from a config file");
  run->add_option("--config", o.config, "Experiment config (JSON)");
  add_common(run);

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep config");
  sweep->add_option("--config", o.config, "Experiment config with a sweep");
  add_common(sweep);

  auto* fig = app.add_subcommand("fig", "Run a figure preset");
  fig->add_option("name", o.name, "fig1, fig2, fig3, fig4 or fig5")->required();
  fig->add_option("--scale", o.scale, "Replication scale in (0, 1]")
      ->capture_default_str();
  add_common(fig);

  auto* verify = app.add_subcommand("verify", "Run a theory verification suite");
  verify->add_option("name", o.name, "lemmas, drift, embedded or all")
      ->required();
  verify->add_option("--scale", o.scale,
                     "Replication scale for the embedded suite, in (0, 1]")
      ->capture_default_str();
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (fig->parsed()) return cmd_fig(o);
    return cmd_verify(o);
  } catch (const samba::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
