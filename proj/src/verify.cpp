#include "samba/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "samba/errors.hpp"
#include "samba/figures.hpp"
#include "samba/policy.hpp"
#include "samba/rng.hpp"
#include "samba/study.hpp"

namespace samba {
namespace {

using Point = std::vector<std::pair<std::string, double>>;

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::vector<double> random_means(RngStream& rng, std::size_t n) {
  std::vector<double> m(n);
  for (double& x : m) x = rng.uniform();
  return m;
}

// Random interior point of the simplex with `best` strictly leading.
std::vector<double> random_state(RngStream& rng, std::size_t n, Arm best) {
  std::vector<double> p(n);
  double sum = 0.0;
  for (double& x : p) {
    x = -std::log(1.0 - rng.uniform());
    sum += x;
  }
  for (double& x : p) x /= sum;
  const auto top = std::max_element(p.begin(), p.end());
  std::iter_swap(top, p.begin() + static_cast<std::ptrdiff_t>(best));
  return p;
}

Schedule random_schedule(RngStream& rng, std::size_t which) {
  switch (which % 4) {
    case 0:
      return Schedule::fixed(0.001 + 0.998 * rng.uniform());
    case 1:
      return Schedule::log_cooling(0.01 + 0.99 * rng.uniform());
    case 2:
      return Schedule::loglog_cooling(0.01 + 0.99 * rng.uniform());
    default: {
      static const char* names[] = {"one", "inv_log", "inv_loglog"};
      return Schedule::slowly_varying(names[rng.below(3)]);
    }
  }
}

}  // namespace

std::vector<Schedule> verification_schedules() {
  return {Schedule::fixed(0.1), Schedule::log_cooling(1.0),
          Schedule::loglog_cooling(1.0), Schedule::slowly_varying("inv_log"),
          Schedule::slowly_varying("inv_loglog")};
}

CheckResult check_lambert_accuracy(std::size_t points) {
  MarginTracker tracker("lambert_w_accuracy", 0.0);
  const double lo = std::log(std::numbers::e);
  const double hi = std::log(1e8);
  for (std::size_t k = 0; k < points; ++k) {
    const double y =
        k == 0 ? std::numbers::e
               : std::exp(lo + (hi - lo) * double(k) / double(points - 1));
    const double w = theory::lambert_w(y);
    const double rel = std::abs(w * std::exp(w) - y) / y;
    tracker.observe_lazy(1e-12 - rel, [&] {
      return Point{{"y", y}, {"W", w}, {"rel_err", rel}};
    });
  }
  return tracker.result("|W e^W - y| / y <= 1e-12 on [e, 1e8]");
}

Report verify_lemmas(const VerifyOptions& o) {
  Report r;
  r.suite = "lemmas";
  r.append(theory::check_inequality_suite(o.inequality_resolution, o.seed + 1));
  r.append(theory::check_random_recursions(o.recursion_cases, o.seed + 2));
  for (const auto& s : verification_schedules()) {
    const std::size_t grid = s.kind() == ScheduleKind::SlowlyVarying
                                 ? o.slowly_varying_shape_grid
                                 : o.shape_grid;
    r.checks.push_back(theory::check_schedule_shape(s, grid));
  }
  r.checks.push_back(check_lambert_accuracy(o.lambert_points));
  return r;
}

Report check_drift_oracle(std::size_t cases, std::uint64_t seed,
                          const theory::UpdateRule& rule) {
  RngStream rng(seed);
  MarginTracker identity("drift_identity", 0.0);
  MarginTracker bound("drift_bound", 0.0);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t n = 2 + rng.below(9);
    BanditInstance inst(random_means(rng, n));
    if (inst.degenerate()) continue;
    const auto state = random_state(rng, n, inst.optimal_arm());
    const Schedule s = random_schedule(rng, c);
    const auto d = theory::estimate_drift(inst, s, state, rule);
    const double err = std::abs(d.drift - d.closed_form);
    const auto point = [&] {
      return Point{{"case", double(c)},       {"n_arms", double(n)},
                   {"schedule_kind", double(s.kind())},
                   {"parameter", s.parameter()},
                   {"q", d.q},                {"drift", d.drift},
                   {"closed_form", d.closed_form},
                   {"bound", d.bound}};
    };
    identity.observe_lazy(1e-12 - err, point);
    bound.observe_lazy(d.bound + 3.0 * d.stderr_ - d.drift, point);
  }
  Report r;
  r.suite = "drift";
  r.checks.push_back(identity.result(
      "|enumerated drift - sum gamma(p_a)(r_a - r*)| <= 1e-12 over " +
      std::to_string(cases) + " configurations"));
  r.checks.push_back(bound.result("enumerated drift <= supermartingale bound"));
  return r;
}

CheckResult check_simplex_positivity(std::uint64_t steps, std::uint64_t seed) {
  constexpr std::uint64_t kTrajectory = 10000;
  const auto schedules = verification_schedules();
  RngStream rng(seed);
  MarginTracker sum_check("simplex_positivity", 0.0);
  double worst_sum = 0.0;
  double min_p = 1.0;
  std::uint64_t done = 0;
  for (std::size_t k = 0; k < schedules.size(); ++k) {
    const Schedule& s = schedules[k];
    const std::uint64_t quota = steps / schedules.size() +
                                (k < steps % schedules.size() ? 1 : 0);
    std::uint64_t taken = 0;
    while (taken < quota) {
      const std::size_t n = 2 + rng.below(11);
      BanditInstance inst(random_means(rng, n));
      std::vector<double> p(n, 1.0 / double(n));
      const std::uint64_t len = std::min(kTrajectory, quota - taken);
      for (std::uint64_t t = 0; t < len; ++t) {
        const Arm leader = leading_arm(p, rng);
        const Arm played = samba_select(p, rng);
        const int reward = sample_reward(inst, played, rng).reward;
        samba_update_in_place(p, s, leader, played, reward);
        double sum = 0.0;
        double lo = 1.0;
        for (double x : p) {
          sum += x;
          lo = std::min(lo, x);
        }
        const double dev = std::abs(sum - 1.0);
        worst_sum = std::max(worst_sum, dev);
        min_p = std::min(min_p, lo);
        // Margin is negative if either condition is violated.
        const double margin = lo > 0.0 ? 1e-9 - dev : -1.0;
        sum_check.observe_lazy(margin, [&] {
          return Point{{"step", double(done + t)},
                       {"schedule_kind", double(s.kind())},
                       {"n_arms", double(n)},
                       {"sum_deviation", dev},
                       {"min_p", lo}};
        });
      }
      taken += len;
      done += len;
    }
  }
  return sum_check.result(std::to_string(done) +
                          " updates: max |sum p - 1| " + fmt("%.3g", worst_sum) +
                          ", min p " + fmt("%.3g", min_p));
}

Report verify_drift(const VerifyOptions& o, const theory::UpdateRule& rule) {
  Report r = check_drift_oracle(o.drift_cases, o.seed + 3, rule);
  r.checks.push_back(check_simplex_positivity(o.simplex_steps, o.seed + 4));
  return r;
}

Report verify_embedded(const VerifyOptions& o) {
  SambaStudyConfig c;
  c.instance = BanditInstance({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
  c.schedule = Schedule::fixed(0.1);
  c.horizon = 100000;
  c.replications = scaled_count(2000, o.scale);
  c.base_seed = o.seed;
  c.embedded_points = {100, 1000, 10000};
  const SambaStudyResult res = run_samba_study(c, o.jobs);

  const std::size_t n = c.instance.num_arms();
  const double delta = *c.instance.min_gap();
  Report r = theory::embedded_decay_check(
      res.embedded, c.embedded_points, [&](double s) {
        return theory::embedded_bound_fixed(n, 0.1, delta, s);
      });
  r.suite = "embedded";
  const auto q = theory::estimate_Q(res.transience);
  r.checks.push_back(q.plateau);

  CheckResult info;
  info.name = "lock_in_fraction";
  info.status = CheckStatus::Info;
  info.evaluations = res.replications;
  info.worst_margin = res.lock_in_fraction();
  info.detail = std::to_string(res.locked_in) + " of " +
                std::to_string(res.replications) +
                " replications end with p > 0.99 on a suboptimal arm";
  r.checks.push_back(info);
  return r;
}

Report run_verify_suite(std::string_view suite, const VerifyOptions& o) {
  if (suite == "lemmas") return verify_lemmas(o);
  if (suite == "drift") return verify_drift(o);
  if (suite == "embedded") return verify_embedded(o);
  if (suite == "all") {
    Report r = verify_lemmas(o);
    r.suite = "all";
    r.append(verify_drift(o));
    r.append(verify_embedded(o));
    return r;
  }
  throw ConfigError("unknown suite '" + std::string(suite) +
                        "' (expected lemmas, drift, embedded or all)",
                    "suite");
}

}  // namespace samba
