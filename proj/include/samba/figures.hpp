#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "samba/agent.hpp"
#include "samba/harness.hpp"

namespace samba {

// Names accepted by figure_config / run_figure.
const std::vector<std::string>& figure_names();

// ceil(base * scale), at least 1. Throws ConfigError("scale") unless
// 0 < scale <= 1.
std::uint64_t scaled_count(std::uint64_t base, double scale);

// The comparison set used by fig3, fig4 and fig5: SAMBA alpha=0.1, SAMBA
// cooling beta=1, Thompson, UCB1, GBA alpha=0.1, Exp3, eps-greedy decaying,
// eps-greedy 0.1.
std::vector<AgentSpec> comparison_agents();

// Preset experiment for fig1..fig4:
//   fig1  arms 0.1..0.9, SAMBA fixed alpha in {0.5, 0.1, 0.01, 0.001},
//         T = 1e5, R = ceil(1000 scale), 26 log-spaced snapshots
//   fig2  same instance, log cooling beta in {0.1, 0.25, 0.5, 1.0}
//   fig3  arms (0.1, 0.5, 0.8, 0.9), comparison agents, T = 1000,
//         R = ceil(1000 scale), 31 log-spaced snapshots
//   fig4  arms (0.01, 0.05, 0.08, 0.09), otherwise as fig3
// Throws ConfigError("figure") for other names.
ExperimentConfig figure_config(std::string_view name, double scale,
                               std::uint64_t seed);

// Metrics CSV with an extra trailing column reference_100_over_t = 100 / t.
void write_csv_with_reference(std::ostream& out, const MetricsTable& table);

// Gnuplot-friendly two-column data: a "# x_label y_label" comment line, then
// "x y" per line.
void write_dat(std::ostream& out, std::string_view x_label,
               std::string_view y_label, const std::vector<double>& x,
               const std::vector<double>& y);

struct Fig5Row {
  std::size_t n_arms = 0;
  std::string agent;
  double mean_reward = 0.0;  // mean over instances of (1/T) sum_t r_{A_t}
  double mean_reward_se = 0.0;
  std::size_t instances = 0;
};

inline constexpr const char* kFig5CsvHeader =
    "n_arms,agent,mean_reward,mean_reward_se,instances";

// For each N in `arm_counts`, ceil(100 scale) instances with means
// U[0, 0.1] (fixed per N by the seed), one replication of every agent per
// instance over `horizon` steps.
std::vector<Fig5Row> run_fig5(double scale, std::uint64_t seed, unsigned jobs,
                              const std::vector<std::size_t>& arm_counts,
                              std::uint64_t horizon,
                              const std::vector<AgentSpec>& agents);

void write_fig5_csv(std::ostream& out, const std::vector<Fig5Row>& rows);

// Runs a preset and writes <name>.csv plus one <name>_<agent>.dat per agent
// (fig1/fig2: 1 - mean p_{a*}(t) and reference_100_over_t.dat; fig3/fig4:
// mean pseudo-regret; fig5: mean reward against N) into `out_dir`. Returns
// the written paths.
std::vector<std::filesystem::path> run_figure(std::string_view name,
                                              double scale, std::uint64_t seed,
                                              unsigned jobs,
                                              const std::filesystem::path& out_dir);

// Agent name reduced to [A-Za-z0-9_.=-] for use in file names.
std::string file_safe(std::string_view name);

}  // namespace samba
