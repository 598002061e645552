#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "samba/errors.hpp"
#include "samba/figures.hpp"
#include "samba/harness.hpp"
#include "samba/study.hpp"

using namespace samba;

namespace {

const std::vector<double> kFourArms{0.1, 0.5, 0.8, 0.9};

AgentSpec samba_fixed(double alpha) {
  return make_agent_spec(SambaSpec{Schedule::fixed(alpha), {}, {}});
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.name = "small";
  c.instances.emplace_back(kFourArms);
  c.agents = {samba_fixed(0.1), make_agent_spec(ThompsonSpec{}),
              make_agent_spec(Ucb1Spec{})};
  c.horizon = 200;
  c.replications = 20;
  c.base_seed = 17;
  c.snapshots = snapshot_grid(200, 5);
  return c;
}

std::string csv_of(const MetricsTable& t) {
  std::ostringstream out;
  write_csv(out, t);
  return out.str();
}

}  // namespace

TEST_CASE("snapshot grid examples") {
  CHECK(snapshot_grid(1000, 4) == std::vector<std::uint64_t>{1, 10, 100, 1000});
  CHECK(snapshot_grid(1, 5) == std::vector<std::uint64_t>{1});
  CHECK(snapshot_grid(100000, 6) ==
        std::vector<std::uint64_t>{1, 10, 100, 1000, 10000, 100000});
  CHECK(snapshot_grid(50, 1) == std::vector<std::uint64_t>{50});
}

TEST_CASE("snapshot grid is sorted, unique and ends at the horizon") {
  for (std::uint64_t T : {2ull, 7ull, 999ull, 123456ull}) {
    for (std::size_t n : {2u, 10u, 40u}) {
      const auto g = snapshot_grid(T, n);
      CHECK(g.size() <= n);
      CHECK(g.back() == T);
      CHECK(g.front() >= 1);
      for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    }
  }
}

TEST_CASE("generated instances are deterministic and uniform") {
  CHECK_THROWS_AS(generate_instances(10, 0.1, 0.1, 5, 1), ConfigError);
  CHECK_THROWS_AS(generate_instances(10, 0.5, 0.2, 5, 1), ConfigError);
  const auto a = generate_instances(10, 0.0, 0.1, 100, 42);
  const auto b = generate_instances(10, 0.0, 0.1, 100, 42);
  REQUIRE(a.size() == 100);
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].means() == b[k].means());
    for (double m : a[k].means()) {
      CHECK((m >= 0.0 && m <= 0.1));
      sum += m;
    }
  }
  const double grand = sum / 1000.0;
  CHECK(std::abs(grand - 0.05) <= 3.0 * (0.1 / std::sqrt(12.0)) / std::sqrt(1000.0));
}

TEST_CASE("equal means give zero pseudo-regret for every agent") {
  const BanditInstance flat({0.4, 0.4, 0.4});
  const std::vector<std::uint64_t> snaps{1, 10, 100};
  for (const auto& spec : comparison_agents()) {
    for (const auto& s : run_replication(flat, spec, 100, 3, snaps)) {
      CHECK(s.pseudo_regret == 0.0);
    }
  }
}

TEST_CASE("replication rejects a zero horizon and unbuildable agents") {
  const BanditInstance inst(kFourArms);
  const std::vector<std::uint64_t> snaps{1};
  CHECK_THROWS_AS(run_replication(inst, samba_fixed(0.1), 0, 1, snaps), ConfigError);
  CHECK_THROWS_AS(run_replication(inst, make_agent_spec(GbaSpec{0.0}), 10, 1, snaps),
                  ConfigError);
}

TEST_CASE("replications replay identically from the same seed") {
  const BanditInstance inst(kFourArms);
  const auto snaps = snapshot_grid(500, 10);
  for (const auto& spec : comparison_agents()) {
    const auto a = run_replication(inst, spec, 500, 99, snaps);
    const auto b = run_replication(inst, spec, 500, 99, snaps);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].pseudo_regret == b[k].pseudo_regret);
      CHECK(a[k].realized_regret == b[k].realized_regret);
      CHECK(a[k].suboptimal_play == b[k].suboptimal_play);
      CHECK((a[k].p_optimal == b[k].p_optimal ||
             (std::isnan(a[k].p_optimal) && std::isnan(b[k].p_optimal))));
    }
  }
}

TEST_CASE("a single replication is reproduced with zero standard error") {
  auto c = small_config();
  c.replications = 1;
  const auto table = run_experiment(c);
  for (std::size_t a = 0; a < c.agents.size(); ++a) {
    const auto reps = run_replication(c.instances[0], c.agents[a], c.horizon,
                                      replication_seed(c, a, 0, 0), c.snapshots);
    const auto rows = table.select(c.agents[a].name, 0);
    REQUIRE(rows.size() == reps.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      CHECK(rows[k].pseudo_regret_mean == reps[k].pseudo_regret);
      CHECK(rows[k].pseudo_regret_se == 0.0);
      CHECK(rows[k].realized_regret_mean == reps[k].realized_regret);
      CHECK(rows[k].p_suboptimal_play == double(reps[k].suboptimal_play));
    }
  }
}

TEST_CASE("the first R replications do not depend on the total count") {
  auto c = small_config();
  const auto seeds_before = replication_seed(c, 1, 0, 7);
  c.replications *= 2;
  CHECK(replication_seed(c, 1, 0, 7) == seeds_before);
  // Means over R runs recomputed from the 2R experiment's seeds.
  auto half = small_config();
  const auto t_half = run_experiment(half);
  double sum = 0.0;
  for (std::uint64_t r = 0; r < half.replications; ++r) {
    sum += run_replication(c.instances[0], c.agents[1], c.horizon,
                           replication_seed(c, 1, 0, r), c.snapshots)
               .back()
               .pseudo_regret;
  }
  CHECK(t_half.select(c.agents[1].name, 0).back().pseudo_regret_mean ==
        doctest::Approx(sum / double(half.replications)).epsilon(1e-15));
}

TEST_CASE("results are identical for any job count") {
  const auto c = small_config();
  const auto one = csv_of(run_experiment(c, 1));
  CHECK(one == csv_of(run_experiment(c, 3)));
  CHECK(one == csv_of(run_experiment(c, 0)));
}

TEST_CASE("uniform agent pseudo-regret matches 325") {
  ExperimentConfig c;
  c.instances.emplace_back(kFourArms);
  c.agents = {make_agent_spec(UniformSpec{})};
  c.horizon = 1000;
  c.replications = 1000;
  c.base_seed = 5;
  c.snapshots = {1000};
  const auto row = run_experiment(c).rows.at(0);
  CHECK(row.pseudo_regret_se > 0.0);
  CHECK(std::abs(row.pseudo_regret_mean - 325.0) <= 3.0 * row.pseudo_regret_se);
}

TEST_CASE("table invariants: monotone regret, p in (0,1), exact play frequency") {
  auto c = small_config();
  c.metrics = MetricsFlags{};
  const auto table = run_experiment(c);
  for (const auto& spec : c.agents) {
    const auto rows = table.select(spec.name, 0);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      CHECK(rows[k].pseudo_regret_se >= 0.0);
      CHECK((rows[k].p_suboptimal_play >= 0.0 && rows[k].p_suboptimal_play <= 1.0));
      const double scaled = rows[k].p_suboptimal_play * double(c.replications);
      CHECK(scaled == std::round(scaled));
      if (k > 0) CHECK(rows[k].pseudo_regret_mean >= rows[k - 1].pseudo_regret_mean);
      if (spec.name.rfind("samba", 0) == 0) {
        CHECK((rows[k].p_optimal_mean > 0.0 && rows[k].p_optimal_mean < 1.0));
      } else {
        CHECK(std::isnan(rows[k].p_optimal_mean));
      }
    }
  }
}

TEST_CASE("realized and pseudo-regret agree within 3 pooled standard errors") {
  const BanditInstance inst(kFourArms);
  const std::vector<std::uint64_t> snaps{1000};
  for (const auto& spec : {samba_fixed(0.1), make_agent_spec(Ucb1Spec{})}) {
    constexpr int kReps = 1000;
    std::vector<double> pseudo, realized;
    for (int r = 0; r < kReps; ++r) {
      const auto s = run_replication(inst, spec, 1000, derive_seed(8, 0, 0, r), snaps);
      pseudo.push_back(s[0].pseudo_regret);
      realized.push_back(s[0].realized_regret);
    }
    const auto mean_var = [](const std::vector<double>& v) {
      double m = 0.0;
      for (double x : v) m += x;
      m /= double(v.size());
      double ss = 0.0;
      for (double x : v) ss += (x - m) * (x - m);
      return std::pair{m, ss / double(v.size() - 1)};
    };
    const auto [mp, vp] = mean_var(pseudo);
    const auto [mr, vr] = mean_var(realized);
    const double pooled = std::sqrt(vp / kReps + vr / kReps);
    CHECK(std::abs(mp - mr) <= 3.0 * pooled);
  }
}

TEST_CASE("disabled metrics are written as nan") {
  auto c = small_config();
  c.metrics.realized_regret = false;
  c.metrics.suboptimal_play = false;
  const auto table = run_experiment(c);
  for (const auto& r : table.rows) {
    CHECK(std::isnan(r.realized_regret_mean));
    CHECK(std::isnan(r.p_suboptimal_play));
    CHECK_FALSE(std::isnan(r.pseudo_regret_mean));
  }
}

TEST_CASE("validation names the offending key") {
  const auto expect_key = [](ExperimentConfig c, const std::string& key) {
    try {
      validate(c);
      FAIL("expected ConfigError for " << key);
    } catch (const ConfigError& e) {
      CHECK(e.key() == key);
    }
  };
  auto c = small_config();
  c.horizon = 0;
  expect_key(c, "horizon");
  c = small_config();
  c.replications = 0;
  expect_key(c, "replications");
  c = small_config();
  c.snapshots = {10, 5};
  expect_key(c, "snapshots");
  c = small_config();
  c.snapshots = {500};
  expect_key(c, "snapshots");
  c = small_config();
  c.agents.clear();
  expect_key(c, "agents");
  c = small_config();
  c.instances.clear();
  expect_key(c, "instances");
}

TEST_CASE("CSV layout") {
  CHECK(std::string(kMetricsCsvHeader) ==
        "agent,instance,t,pseudo_regret_mean,pseudo_regret_se,"
        "realized_regret_mean,p_optimal_mean,p_suboptimal_play,runs");
  MetricsTable t;
  MetricsRow r;
  r.agent = "a,b";
  r.instance = 0;
  r.t = 10;
  r.pseudo_regret_mean = 1.0 / 3.0;
  r.pseudo_regret_se = 0.0;
  r.realized_regret_mean = 2.5;
  r.p_optimal_mean = std::nan("");
  r.p_suboptimal_play = 0.25;
  r.runs = 4;
  t.rows.push_back(r);
  CHECK(csv_of(t) == std::string(kMetricsCsvHeader) +
                         "\n\"a,b\",0,10,0.333333333,0,2.5,nan,0.25,4\n");
  CHECK(format_float(123456789.123) == "123456789");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("parallel_for runs every index and rethrows the first failure") {
  std::vector<int> hits(100, 0);
  parallel_for(100, 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_WITH(parallel_for(10, 3,
                                 [](std::size_t i) {
                                   if (i == 3 || i == 7) {
                                     throw std::runtime_error("task " + std::to_string(i));
                                   }
                                 }),
                    "task 3");
}

TEST_CASE("SAMBA study agrees with the experiment runner") {
  SambaStudyConfig sc;
  sc.instance = BanditInstance(kFourArms);
  sc.schedule = Schedule::fixed(0.1);
  sc.horizon = 300;
  sc.replications = 40;
  sc.base_seed = 21;
  sc.snapshots = snapshot_grid(300, 6);
  const auto study = run_samba_study(sc, 2);

  ExperimentConfig c;
  c.instances = {sc.instance};
  c.agents = {samba_fixed(0.1)};
  c.horizon = sc.horizon;
  c.replications = sc.replications;
  c.base_seed = sc.base_seed;
  c.snapshots = sc.snapshots;
  const auto rows = run_experiment(c).rows;
  REQUIRE(rows.size() == study.q_mean.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(study.q_mean[k] == doctest::Approx(1.0 - rows[k].p_optimal_mean).epsilon(1e-12));
    CHECK(study.pseudo_regret_mean[k] ==
          doctest::Approx(rows[k].pseudo_regret_mean).epsilon(1e-12));
  }
  CHECK(study.replications == 40);
  CHECK(study.transience.replications() == 40);
}

TEST_CASE("log-log slope recovers a power law") {
  std::vector<std::uint64_t> x;
  std::vector<double> y;
  for (std::uint64_t t = 1; t <= 100000; t *= 10) {
    x.push_back(t);
    y.push_back(3.0 * std::pow(double(t), -0.8));
  }
  CHECK(log_log_slope(x, y, 1e3, 1e5) == doctest::Approx(-0.8).epsilon(1e-12));
  CHECK(std::isnan(log_log_slope(x, y, 2e3, 5e3)));
}

TEST_CASE("figure presets") {
  CHECK(scaled_count(1000, 1.0) == 1000);
  CHECK(scaled_count(1000, 0.0015) == 2);
  CHECK(scaled_count(100, 0.001) == 1);
  CHECK_THROWS_AS(scaled_count(10, 0.0), ConfigError);
  CHECK_THROWS_AS(scaled_count(10, 1.5), ConfigError);

  const auto f1 = figure_config("fig1", 1.0, 0);
  CHECK(f1.agents.size() == 4);
  CHECK(f1.horizon == 100000);
  CHECK(f1.replications == 1000);
  CHECK(f1.instances[0].num_arms() == 9);

  const auto f3 = figure_config("fig3", 0.5, 0);
  CHECK(f3.instances[0].means() == kFourArms);
  CHECK(f3.horizon == 1000);
  CHECK(f3.replications == 500);
  CHECK(f3.agents.size() == comparison_agents().size());

  const auto f4 = figure_config("fig4", 1.0, 0);
  CHECK(f4.instances[0].means() == std::vector<double>{0.01, 0.05, 0.08, 0.09});

  const auto f2 = figure_config("fig2", 1.0, 0);
  bool has_beta_one = false;
  for (const auto& a : f2.agents) has_beta_one |= a.name == "samba_cooling(beta=1)";
  CHECK(has_beta_one);

  CHECK_THROWS_AS(figure_config("fig9", 1.0, 0), ConfigError);
}

TEST_CASE("reference column and gnuplot data") {
  MetricsTable t;
  MetricsRow r;
  r.agent = "x";
  r.t = 50;
  r.runs = 1;
  t.rows.push_back(r);
  std::ostringstream csv;
  write_csv_with_reference(csv, t);
  const std::string s = csv.str();
  CHECK(s.find(",reference_100_over_t\n") != std::string::npos);
  CHECK(s.substr(s.size() - 3) == ",2\n");

  std::ostringstream dat;
  write_dat(dat, "t", "q", {1, 10}, {0.5, 0.25});
  CHECK(dat.str() == "# t q\n1 0.5\n10 0.25\n");

  CHECK(file_safe("samba(alpha=0.1)") == "samba_alpha=0.1");
  CHECK(file_safe("eps greedy/x") == "eps_greedy_x");
}

TEST_CASE("fig5 mean reward at small scale") {
  const auto rows = run_fig5(0.03, 4, 1, {10}, 2000,
                             {make_agent_spec(Ucb1Spec{}), make_agent_spec(UniformSpec{})});
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.instances == 3);
    CHECK((r.mean_reward >= 0.0 && r.mean_reward <= 0.1));
  }
  std::ostringstream out;
  write_fig5_csv(out, rows);
  CHECK(out.str().rfind(std::string(kFig5CsvHeader) + "\n10,ucb1,", 0) == 0);
}
