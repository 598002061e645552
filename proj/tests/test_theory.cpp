#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "samba/policy.hpp"
#include "samba/report.hpp"
#include "samba/theory.hpp"
#include "samba/verify.hpp"

using namespace samba;
using namespace samba::theory;

namespace {

const CheckResult& find_check(const Report& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("no check named " + name);
}

double point_value(const CheckResult& c, const std::string& key) {
  for (const auto& [k, v] : c.worst_point) {
    if (k == key) return v;
  }
  throw std::runtime_error("no coordinate " + key);
}

}  // namespace

TEST_CASE("Lambert W values") {
  constexpr double e = std::numbers::e;
  CHECK(lambert_w(e) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lambert_w(10.0) == doctest::Approx(1.7455280027406994).epsilon(1e-14));
  CHECK(lambert_w(std::exp(e + 1.0)) == doctest::Approx(e).epsilon(1e-14));
  CHECK_THROWS_AS(lambert_w(2.0), std::domain_error);
}

TEST_CASE("Lambert W relative residual on [e, 1e8]") {
  const auto c = check_lambert_accuracy(100000);
  CHECK(c.status == CheckStatus::Pass);
  CHECK(c.evaluations == 100000);
}

TEST_CASE("log ratio inequality at the ends of its range") {
  const double z = 1.0 / 3.0;
  const double lhs = -std::log1p(-z) / (1.0 - z);
  CHECK(lhs == doctest::Approx(0.608198).epsilon(1e-6));
  CHECK(z + 4 * z * z == doctest::Approx(0.777778).epsilon(1e-6));
  CHECK(-std::log1p(-0.0) / 1.0 == 0.0);
}

TEST_CASE("harmonic sum example A=1, B=3, C=1, T=10") {
  double sum = 0.0;
  for (int s = 0; s < 10; ++s) sum += 1.0 / (3.0 + s);
  CHECK(sum == doctest::Approx(1.603211).epsilon(1e-6));
  CHECK(sum <= std::log(10.0));
}

TEST_CASE("inequality suite: the checks that hold pass at resolution 1e4") {
  const Report r = check_inequality_suite(10000, 1);
  for (const char* name : {"lambert_lower", "lambert_footnote", "log_ratio",
                           "log_over_t_sum", "heuristic_ode"}) {
    CAPTURE(name);
    CHECK(find_check(r, name).status == CheckStatus::Pass);
  }
  CHECK_THROWS_AS(check_inequality_suite(50), std::invalid_argument);
}

TEST_CASE("harmonic bound fails for B/C just above 2 at T = 2") {
  // A = C = 1, B = 2.1: 1/2.1 + 1/3.1 = 0.7988 > log 2 = 0.6931.
  const double lhs = 1.0 / 2.1 + 1.0 / 3.1;
  CHECK(lhs == doctest::Approx(0.798771).epsilon(1e-6));
  CHECK(lhs > std::log(2.0));

  const Report r = check_inequality_suite(10000, 1);
  const auto& c = find_check(r, "harmonic_abc");
  CHECK(c.status == CheckStatus::Fail);
  CHECK(point_value(c, "T") == 2.0);
  const double ratio = point_value(c, "B") / point_value(c, "C");
  CHECK((ratio > 2.0 && ratio < 2.5));
}

TEST_CASE("log-log sum bound fails for small theta at T = 2") {
  // theta = 0.05, T = 2: lhs = log(e + log 0.1)/2 = -0.4389,
  // rhs = log 2 * log(e + log 0.1) = -0.6084.
  const double inner = std::log(std::numbers::e + std::log(0.1));
  const double lhs = inner / 2.0;
  const double rhs = std::log(2.0) * inner;
  CHECK(lhs == doctest::Approx(-0.438906).epsilon(1e-5));
  CHECK(rhs == doctest::Approx(-0.608452).epsilon(1e-5));
  CHECK(lhs > rhs);

  const Report r = check_inequality_suite(10000, 1);
  const auto& c = find_check(r, "loglog_sum");
  CHECK(c.status == CheckStatus::Fail);
  CHECK(point_value(c, "T") == 2.0);
  CHECK(point_value(c, "theta") < 0.1);
}

TEST_CASE("recursion examples") {
  const auto plain = check_recursion_bounds(0.5, 0.1, 1.0, 10, RecursionVariant::Plain);
  CHECK(plain.bound == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(plain.passed);
  CHECK(plain.final_q <= 0.333333);

  const auto empty = check_recursion_bounds(0.5, 0.1, 1.0, 0, RecursionVariant::Plain);
  CHECK(empty.bound == 0.5);
  CHECK(empty.final_q == 0.5);
  CHECK(empty.passed);

  const auto cooling =
      check_recursion_bounds(0.5, 0.1, 1.0, 100, RecursionVariant::LogCooling);
  CHECK(cooling.bound == doctest::Approx(0.230259).epsilon(1e-6));
  CHECK(cooling.passed);

  const auto loglog =
      check_recursion_bounds(0.5, 0.1, 1.0, 100, RecursionVariant::LogLogCooling);
  CHECK(loglog.bound == doctest::Approx(std::log(std::numbers::e + std::log(10.0)) / 10.0));
  CHECK(loglog.passed);
}

TEST_CASE("recursion preconditions") {
  CHECK_THROWS_AS(check_recursion_bounds(0.0, 0.1, 1, 10, RecursionVariant::Plain),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_recursion_bounds(0.5, 0.0, 1, 10, RecursionVariant::Plain),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_recursion_bounds(0.5, 0.1, 1, 10, RecursionVariant::LogCooling),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_recursion_bounds(0.5, 0.1, 3, 100, RecursionVariant::LogCooling),
                  std::invalid_argument);
}

TEST_CASE("random admissible recursions satisfy their bounds") {
  const Report r = check_random_recursions(1000, 2);
  REQUIRE(r.checks.size() == 3);
  for (const auto& c : r.checks) {
    CAPTURE(c.name);
    CHECK(c.status == CheckStatus::Pass);
    CHECK(c.evaluations == 1000);
  }
}

TEST_CASE("schedule shapes are increasing and convex") {
  for (const auto& s : verification_schedules()) {
    CAPTURE(s.label());
    CHECK(check_schedule_shape(s, 2000).status == CheckStatus::Pass);
  }
  CHECK(check_schedule_shape(Schedule::log_cooling(1.0), 10000).status ==
        CheckStatus::Pass);
}

TEST_CASE("a non-convex function fails the shape check at a located point") {
  const auto c = check_function_shape("sine", [](double p) { return std::sin(3.0 * p); }, 1000);
  CHECK(c.status == CheckStatus::Fail);
  CHECK(c.worst_margin < 0.0);
  CHECK_FALSE(c.worst_point.empty());
  const double p = point_value(c, "p");
  CHECK((p > 0.0 && p < 1.0));
}

TEST_CASE("drift example with two arms") {
  const BanditInstance inst({0.9, 0.8});
  const std::vector<double> state{0.75, 0.25};
  const auto d = estimate_drift(inst, Schedule::fixed(0.1), state);
  CHECK(d.q == 0.25);
  CHECK(d.drift == doctest::Approx(-0.000625).epsilon(1e-12));
  CHECK(d.closed_form == doctest::Approx(-0.000625).epsilon(1e-12));
  CHECK(d.bound == doctest::Approx(-0.0003125).epsilon(1e-12));
  CHECK(d.pass);
}

TEST_CASE("drift preconditions") {
  const std::vector<double> state{0.75, 0.25};
  CHECK_THROWS_AS(estimate_drift(BanditInstance({0.5, 0.5}), Schedule::fixed(0.1), state),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_drift(BanditInstance({0.5, 0.9}), Schedule::fixed(0.1), state),
                  std::invalid_argument);
}

TEST_CASE("drift vanishes near the optimal vertex") {
  const BanditInstance inst({0.9, 0.8});
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    const std::vector<double> state{1.0 - eps, eps};
    const auto d = estimate_drift(inst, Schedule::fixed(0.1), state);
    const double exact = -0.1 * 0.1 * eps * eps;
    CHECK(d.drift < 0.0);
    CHECK(std::abs(d.drift - exact) <= 1e-12);
    CHECK(std::abs(d.closed_form - exact) <= 1e-12);
  }
}

TEST_CASE("drift oracle passes on random configurations") {
  const Report r = check_drift_oracle(300, 11);
  CHECK(r.passed());
  CHECK(find_check(r, "drift_identity").status == CheckStatus::Pass);
  CHECK(find_check(r, "drift_bound").status == CheckStatus::Pass);
}

TEST_CASE("a mutated update fails the drift oracle") {
  // The leader-played branch forgets to divide by p_leader.
  const UpdateRule mutated = [](std::vector<double>& p, const Schedule& s, Arm leader,
                                Arm played, int reward) {
    if (reward == 0) return;
    if (played != leader) {
      samba_update_in_place(p, s, leader, played, reward);
      return;
    }
    double rest = 0.0;
    for (Arm a = 0; a < p.size(); ++a) {
      if (a == leader) continue;
      p[a] -= s.gamma(p[a]);
      rest += p[a];
    }
    p[leader] = 1.0 - rest;
  };
  const Report r = check_drift_oracle(300, 11, mutated);
  CHECK_FALSE(r.passed());
  CHECK(find_check(r, "drift_identity").status == CheckStatus::Fail);
}

TEST_CASE("simplex positivity on random trajectories") {
  const auto c = check_simplex_positivity(50000, 4);
  CHECK(c.status == CheckStatus::Pass);
  CHECK(c.evaluations == 50000);
}

TEST_CASE("embedded chain of a trajectory below one half is the trajectory") {
  const std::vector<double> q{0.4, 0.3, 0.2, 0.1};
  const auto trace = embedded_chain(q);
  CHECK(trace.values == q);
  CHECK(trace.excursions.empty());
  CHECK(trace.reconstruct() == q);
}

TEST_CASE("one crossing gives exactly one excursion that the chain skips") {
  const std::vector<double> q{0.4, 0.45, 0.5, 0.7, 0.6, 0.3, 0.2};
  const auto trace = embedded_chain(q);
  REQUIRE(trace.excursions.size() == 1);
  CHECK(trace.excursions[0].sigma == 2);
  CHECK(trace.excursions[0].tau == 5);
  CHECK(trace.values == std::vector<double>{0.4, 0.45, 0.3, 0.2});
  CHECK(trace.times == std::vector<std::size_t>{0, 1, 5, 6});
  CHECK(trace.reconstruct() == q);
}

TEST_CASE("excursion reconstruction is exact on random trajectories") {
  RngStream rng(12);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> q(1 + rng.below(300));
    for (double& x : q) x = rng.uniform();
    const auto trace = embedded_chain(q);
    CHECK(trace.reconstruct() == q);
    for (double v : trace.values) CHECK(v < 0.5);
    for (std::size_t k = 0; k < trace.excursions.size(); ++k) {
      const auto& e = trace.excursions[k];
      CHECK(e.sigma < e.tau);
      if (k + 1 < trace.excursions.size()) CHECK(e.tau < trace.excursions[k + 1].sigma);
    }
  }
}

TEST_CASE("a trajectory that never starts below one half is not entered") {
  const std::vector<double> q{0.8, 0.9, 0.6};
  const auto trace = embedded_chain(q);
  CHECK_FALSE(trace.entered());
  REQUIRE(trace.excursions.size() == 1);
  CHECK(trace.excursions[0].tau == 3);
}

TEST_CASE("streaming sampler matches the offline chain") {
  RngStream rng(13);
  std::vector<double> q(2000);
  for (double& x : q) x = 0.6 * rng.uniform();
  const auto trace = embedded_chain(q);
  EmbeddedSampler sampler({0, 10, 100, 5000});
  for (double x : q) sampler.push(x);
  CHECK(sampler.samples()[0] == trace.values[0]);
  CHECK(sampler.samples()[1] == trace.values[10]);
  CHECK(sampler.samples()[2] == trace.values[100]);
  CHECK(std::isnan(sampler.samples()[3]));
  CHECK(sampler.embedded_length() == trace.values.size());
}

TEST_CASE("embedded bound values") {
  CHECK(embedded_bound_fixed(9, 0.1, 0.1, 1e4) == doctest::Approx(9.0 / 118.0).epsilon(1e-15));
  CHECK(embedded_bound_fixed(9, 0.1, 0.1, 1e4) == doctest::Approx(0.076271).epsilon(1e-5));
  CHECK(embedded_bound_cooling(4, 1.0, 0.1, 1000) ==
        doctest::Approx(4.0 / 100.0 * std::log(100.0)));
}

TEST_CASE("embedded decay check with too few replications is inconclusive") {
  std::vector<std::vector<double>> samples(50, std::vector<double>{0.01});
  const std::vector<std::uint64_t> s{100};
  const auto r = embedded_decay_check(samples, s, [](double) { return 0.1; });
  REQUIRE(r.checks.size() == 1);
  CHECK(r.checks[0].status == CheckStatus::Inconclusive);
  CHECK(r.passed());
  CHECK(r.has_inconclusive());
}

TEST_CASE("embedded decay check passes and fails against the bound") {
  std::vector<std::vector<double>> samples;
  for (int i = 0; i < 200; ++i) samples.push_back({0.01 + 0.001 * (i % 10)});
  const std::vector<std::uint64_t> s{100};
  CHECK(embedded_decay_check(samples, s, [](double) { return 0.1; }).passed());
  CHECK_FALSE(embedded_decay_check(samples, s, [](double) { return 0.001; }).passed());
}

TEST_CASE("transience estimates") {
  const std::vector<std::vector<double>> never(100, std::vector<double>(50, 1e-9));
  const auto q0 = estimate_Q(never);
  CHECK(q0.total == 0.0);
  CHECK(q0.plateau.status == CheckStatus::Pass);

  std::vector<std::vector<double>> start_half(100, std::vector<double>(50, 0.1));
  for (auto& t : start_half) t[0] = 0.5;
  const auto q1 = estimate_Q(start_half);
  CHECK(q1.partial_sums[0] == 1.0);
  CHECK(q1.total == 1.0);
  CHECK(q1.tail_increment == 0.0);

  const std::vector<std::vector<double>> few(10, std::vector<double>(5, 0.1));
  CHECK(estimate_Q(few).plateau.status == CheckStatus::Inconclusive);

  const std::vector<std::vector<double>> stuck(100, std::vector<double>(50, 0.9));
  CHECK(estimate_Q(stuck).plateau.status == CheckStatus::Fail);
}

TEST_CASE("transience counters merge") {
  TransienceCounter a(3), b(3);
  a.push(0, 0.5);
  a.end_replication();
  b.push(1, 0.7);
  b.end_replication();
  a.merge(b);
  CHECK(a.replications() == 2);
  CHECK(a.partial_sums() == std::vector<double>{0.5, 1.0, 1.0, 1.0});
  TransienceCounter c(4);
  CHECK_THROWS_AS(a.merge(c), std::invalid_argument);
}

TEST_CASE("report text and json") {
  Report r;
  r.suite = "demo";
  CheckResult ok;
  ok.name = "ok_check";
  ok.detail = "fine";
  CheckResult bad;
  bad.name = "bad_check";
  bad.status = CheckStatus::Fail;
  bad.worst_point = {{"x", 0.5}};
  r.checks = {ok, bad};
  CHECK_FALSE(r.passed());
  const std::string text = r.to_text();
  CHECK(text.find("PASS") != std::string::npos);
  CHECK(text.find("FAIL") != std::string::npos);
  CHECK(text.find("bad_check") != std::string::npos);
  const auto j = r.to_json();
  CHECK(j["suite"] == "demo");
  CHECK(j["checks"].size() == 2);
  CHECK(j["checks"][1]["status"] == "FAIL");
}

TEST_CASE("margin tracker keeps the worst point") {
  MarginTracker t("m", 0.0);
  t.observe(0.5, {{"x", 1.0}});
  t.observe(-0.25, {{"x", 2.0}});
  t.observe(0.1, {{"x", 3.0}});
  const auto c = t.result();
  CHECK(c.failed());
  CHECK(c.worst_margin == -0.25);
  CHECK(c.worst_point[0].second == 2.0);
  CHECK(c.evaluations == 3);
}
