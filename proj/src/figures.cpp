#include "samba/figures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "samba/errors.hpp"

namespace samba {
namespace {

const std::vector<double> kNineArms = {0.1, 0.2, 0.3, 0.4, 0.5,
                                       0.6, 0.7, 0.8, 0.9};

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<std::string> agent_names(const ExperimentConfig& c) {
  std::vector<std::string> out;
  for (const auto& a : c.agents) {
    out.push_back(a.name.empty() ? default_agent_name(a.kind) : a.name);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names = {"fig1", "fig2", "fig3",
                                                 "fig4", "fig5"};
  return names;
}

std::uint64_t scaled_count(std::uint64_t base, double scale) {
  if (!(scale > 0.0 && scale <= 1.0)) {
    throw ConfigError("must lie in (0, 1]", "scale");
  }
  const double n = std::ceil(static_cast<double>(base) * scale - 1e-9);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
}

std::vector<AgentSpec> comparison_agents() {
  return {
      make_agent_spec(SambaSpec{Schedule::fixed(0.1), {}, {}}),
      make_agent_spec(SambaSpec{Schedule::log_cooling(1.0), {}, {}}),
      make_agent_spec(ThompsonSpec{}),
      make_agent_spec(Ucb1Spec{}),
      make_agent_spec(GbaSpec{0.1}),
      make_agent_spec(Exp3Spec{}),
      make_agent_spec(EpsGreedySpec{EpsMode::Decaying, 0.0}),
      make_agent_spec(EpsGreedySpec{EpsMode::Fixed, 0.1}),
  };
}

ExperimentConfig figure_config(std::string_view name, double scale,
                               std::uint64_t seed) {
  ExperimentConfig c;
  c.name = std::string(name);
  c.base_seed = seed;
  if (name == "fig1" || name == "fig2") {
    c.instances.emplace_back(kNineArms);
    c.horizon = 100000;
    c.replications = scaled_count(1000, scale);
    c.snapshots = snapshot_grid(c.horizon, 26);
    if (name == "fig1") {
      for (double a : {0.5, 0.1, 0.01, 0.001}) {
        c.agents.push_back(make_agent_spec(SambaSpec{Schedule::fixed(a), {}, {}}));
      }
    } else {
      for (double b : {0.1, 0.25, 0.5, 1.0}) {
        c.agents.push_back(
            make_agent_spec(SambaSpec{Schedule::log_cooling(b), {}, {}}));
      }
    }
    return c;
  }
  if (name == "fig3" || name == "fig4") {
    c.instances.emplace_back(name == "fig3"
                                 ? std::vector<double>{0.1, 0.5, 0.8, 0.9}
                                 : std::vector<double>{0.01, 0.05, 0.08, 0.09});
    c.agents = comparison_agents();
    c.horizon = 1000;
    c.replications = scaled_count(1000, scale);
    c.snapshots = snapshot_grid(c.horizon, 31);
    return c;
  }
  throw ConfigError("unknown figure preset '" + std::string(name) +
                        "' (expected fig1..fig5)",
                    "figure");
}

void write_csv_with_reference(std::ostream& out, const MetricsTable& table) {
  out << kMetricsCsvHeader << ",reference_100_over_t\n";
  for (const auto& r : table.rows) {
    out << csv_field(r.agent) << ',' << r.instance << ',' << r.t << ','
        << format_float(r.pseudo_regret_mean) << ','
        << format_float(r.pseudo_regret_se) << ','
        << format_float(r.realized_regret_mean) << ','
        << format_float(r.p_optimal_mean) << ','
        << format_float(r.p_suboptimal_play) << ',' << r.runs << ','
        << format_float(100.0 / static_cast<double>(r.t)) << '\n';
  }
}

void write_dat(std::ostream& out, std::string_view x_label,
               std::string_view y_label, const std::vector<double>& x,
               const std::vector<double>& y) {
  out << "# " << x_label << ' ' << y_label << '\n';
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    out << format_float(x[i]) << ' ' << format_float(y[i]) << '\n';
  }
}

std::vector<Fig5Row> run_fig5(double scale, std::uint64_t seed, unsigned jobs,
                              const std::vector<std::size_t>& arm_counts,
                              std::uint64_t horizon,
                              const std::vector<AgentSpec>& agents) {
  const std::size_t n_inst = scaled_count(100, scale);
  std::vector<Fig5Row> rows;
  for (std::size_t n : arm_counts) {
    ExperimentConfig c;
    c.name = "fig5";
    c.instances = generate_instances(n, 0.0, 0.1, n_inst, derive_seed(seed, n, 0, 0));
    c.agents = agents;
    c.horizon = horizon;
    c.replications = 1;
    c.base_seed = derive_seed(seed, n, 1, 0);
    c.snapshots = {horizon};
    const MetricsTable table = run_experiment(c, jobs);
    const auto names = agent_names(c);
    const double T = static_cast<double>(horizon);
    for (const auto& name : names) {
      std::vector<double> rewards;
      for (std::size_t i = 0; i < n_inst; ++i) {
        const auto sel = table.select(name, i);
        rewards.push_back(c.instances[i].optimal_mean() -
                          sel.back().pseudo_regret_mean / T);
      }
      double mean = 0.0;
      for (double r : rewards) mean += r;
      mean /= static_cast<double>(rewards.size());
      double ss = 0.0;
      for (double r : rewards) ss += (r - mean) * (r - mean);
      const double k = static_cast<double>(rewards.size());
      Fig5Row row;
      row.n_arms = n;
      row.agent = name;
      row.mean_reward = mean;
      row.mean_reward_se = rewards.size() > 1 ? std::sqrt(ss / (k - 1.0) / k) : 0.0;
      row.instances = rewards.size();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_fig5_csv(std::ostream& out, const std::vector<Fig5Row>& rows) {
  out << kFig5CsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.n_arms << ',' << csv_field(r.agent) << ','
        << format_float(r.mean_reward) << ',' << format_float(r.mean_reward_se)
        << ',' << r.instances << '\n';
  }
}

std::string file_safe(std::string_view name) {
  std::string out;
  for (char ch : name) {
    if (ch == ')') continue;
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '_' || ch == '.' ||
                    ch == '=' || ch == '-';
    out += ok ? ch : '_';
  }
  return out;
}

std::vector<std::filesystem::path> run_figure(std::string_view name,
                                              double scale, std::uint64_t seed,
                                              unsigned jobs,
                                              const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> written;
  const std::string n(name);
  const auto& names = figure_names();
  if (std::find(names.begin(), names.end(), n) == names.end()) {
    figure_config(name, scale, seed);  // throws the unknown-preset error
  }
  scaled_count(1, scale);
  std::filesystem::create_directories(out_dir);

  if (name == "fig5") {
    std::vector<std::size_t> counts;
    for (std::size_t k = 10; k <= 100; k += 10) counts.push_back(k);
    const auto agents = comparison_agents();
    const auto rows = run_fig5(scale, seed, jobs, counts, 100000, agents);
    const auto csv = out_dir / "fig5.csv";
    auto out = open_output(csv);
    write_fig5_csv(out, rows);
    written.push_back(csv);
    for (const auto& a : agents) {
      const std::string agent = default_agent_name(a.kind);
      std::vector<double> x, y;
      for (const auto& r : rows) {
        if (r.agent != agent) continue;
        x.push_back(static_cast<double>(r.n_arms));
        y.push_back(r.mean_reward);
      }
      const auto dat = out_dir / ("fig5_" + file_safe(agent) + ".dat");
      auto d = open_output(dat);
      write_dat(d, "n_arms", "mean_reward", x, y);
      written.push_back(dat);
    }
    return written;
  }

  const ExperimentConfig config = figure_config(name, scale, seed);
  const MetricsTable table = run_experiment(config, jobs);
  const bool probability_plot = name == "fig1" || name == "fig2";
  const auto csv = out_dir / (n + ".csv");
  {
    auto out = open_output(csv);
    if (probability_plot) {
      write_csv_with_reference(out, table);
    } else {
      write_csv(out, table);
    }
  }
  written.push_back(csv);

  std::vector<double> t;
  for (auto s : config.snapshots) t.push_back(static_cast<double>(s));
  for (const auto& agent : agent_names(config)) {
    std::vector<double> y;
    for (const auto& r : table.select(agent, 0)) {
      y.push_back(probability_plot ? 1.0 - r.p_optimal_mean
                                   : r.pseudo_regret_mean);
    }
    const auto dat = out_dir / (n + "_" + file_safe(agent) + ".dat");
    auto d = open_output(dat);
    write_dat(d, "t", probability_plot ? "p_suboptimal" : "pseudo_regret", t, y);
    written.push_back(dat);
  }
  if (probability_plot) {
    std::vector<double> ref;
    for (double s : t) ref.push_back(100.0 / s);
    const auto dat = out_dir / (n + "_reference_100_over_t.dat");
    auto d = open_output(dat);
    write_dat(d, "t", "reference_100_over_t", t, ref);
    written.push_back(dat);
  }
  return written;
}

}  // namespace samba
