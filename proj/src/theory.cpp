#include "samba/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "samba/policy.hpp"
#include "samba/rng.hpp"

namespace samba::theory {
namespace {

constexpr double kE = std::numbers::e;

double log_uniform(RngStream& rng, double lo, double hi) {
  return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * rng.uniform());
}

double grid_point(double lo, double hi, std::size_t k, std::size_t n) {
  return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
}

double log_grid_point(double lo, double hi, std::size_t k, std::size_t n) {
  return std::exp(grid_point(std::log(lo), std::log(hi), k, n));
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

CheckResult lambert_lower(std::size_t n) {
  MarginTracker bound("lambert_lower", kSlack);
  for (std::size_t k = 0; k < n; ++k) {
    const double y = k == 0 ? kE : log_grid_point(kE, 1e6, k, n);
    const double margin = lambert_w(y) - std::log(y / std::log(y));
    bound.observe_lazy(margin, [&] {
      return std::vector<std::pair<std::string, double>>{{"y", y}};
    });
  }
  return bound.result("W(y) >= log(y/log y), y in [e, 1e6]");
}

CheckResult lambert_footnote(std::size_t n) {
  MarginTracker tracker("lambert_footnote", kSlack);
  for (std::size_t k = 0; k < n; ++k) {
    const double y = k == 0 ? kE : log_grid_point(kE, 1e6, k, n);
    const double z = std::log(y / std::log(y));
    const double margin = (y - z * std::exp(z)) / y;
    tracker.observe_lazy(margin, [&] {
      return std::vector<std::pair<std::string, double>>{{"y", y}, {"z", z}};
    });
  }
  return tracker.result("z = log(y/log y) has z e^z <= y (relative)");
}

CheckResult log_ratio(std::size_t n) {
  MarginTracker tracker("log_ratio", kSlack);
  for (std::size_t k = 0; k < n; ++k) {
    const double z = grid_point(0.0, 1.0 / 3.0, k, n);
    const double lhs = -std::log1p(-z) / (1.0 - z);
    const double rhs = z + 4.0 * z * z;
    tracker.observe_lazy(rhs - lhs, [&] {
      return std::vector<std::pair<std::string, double>>{
          {"z", z}, {"lhs", lhs}, {"rhs", rhs}};
    });
  }
  return tracker.result("-log(1-z)/(1-z) <= z + 4z^2, z in [0, 1/3]");
}

// Grid over b = B/C in (2, 12] and T in [2, 2000]; A and C drawn at random.
CheckResult harmonic_abc(std::size_t n, RngStream& rng) {
  MarginTracker tracker("harmonic_abc", kSlack);
  const auto m = static_cast<std::size_t>(std::ceil(std::sqrt(double(n))));
  for (std::size_t i = 0; i < m; ++i) {
    const double b = 2.0 + 10.0 * static_cast<double>(i + 1) / double(m);
    for (std::size_t j = 0; j < m; ++j) {
      const auto T = static_cast<std::uint64_t>(
          std::llround(log_grid_point(2.0, 2000.0, j, m)));
      const double A = 0.1 + 9.9 * rng.uniform();
      const double C = log_uniform(rng, 0.01, 10.0);
      const double B = b * C;
      double sum = 0.0;
      for (std::uint64_t s = 0; s < T; ++s) sum += A / (B + C * double(s));
      const double rhs = A / C * std::log(double(T));
      tracker.observe_lazy(rhs - sum, [&] {
        return std::vector<std::pair<std::string, double>>{
            {"A", A}, {"B", B}, {"C", C}, {"T", double(T)},
            {"lhs", sum}, {"rhs", rhs}};
      });
    }
  }
  return tracker.result("sum_{s<T} A/(B+Cs) <= (A/C) log T, B > 2C, T >= 2");
}

CheckResult log_over_t_sum(std::size_t n) {
  MarginTracker tracker("log_over_t_sum", kSlack);
  const auto m = static_cast<std::size_t>(std::ceil(std::sqrt(double(n))));
  for (std::size_t i = 0; i < m; ++i) {
    const double theta = log_grid_point(0.01, 100.0, i, m);
    const auto start = static_cast<std::uint64_t>(std::ceil(kE / theta)) + 1;
    for (std::size_t j = 0; j < m; ++j) {
      const std::uint64_t T =
          start - 1 +
          static_cast<std::uint64_t>(std::ceil(log_grid_point(1.0, 1000.0, j, m)));
      double sum = 0.0;
      for (std::uint64_t t = start; t <= T; ++t) {
        const double x = theta * double(t);
        sum += std::log(x) / x;
      }
      const double l = std::log(theta * double(T));
      const double rhs = l * l / (2.0 * theta);
      tracker.observe_lazy(rhs - sum, [&] {
        return std::vector<std::pair<std::string, double>>{
            {"theta", theta}, {"T", double(T)}, {"lhs", sum}, {"rhs", rhs}};
      });
    }
  }
  return tracker.result(
      "sum_{t=ceil(e/th)+1}^T log(th t)/(th t) <= (log th T)^2/(2 th)");
}

// theta ranges over the whole region where every term is defined,
// 2 theta > e^{-e}.
CheckResult loglog_sum(std::size_t n) {
  MarginTracker tracker("loglog_sum", kSlack);
  const auto m = static_cast<std::size_t>(std::ceil(std::sqrt(double(n))));
  const double theta_min = 0.5 * std::exp(-kE) * (1.0 + 1e-6);
  for (std::size_t i = 0; i < m; ++i) {
    const double theta = log_grid_point(theta_min, 10.0, i, m);
    for (std::size_t j = 0; j < m; ++j) {
      const auto T = static_cast<std::uint64_t>(
          std::llround(log_grid_point(2.0, 2000.0, j, m)));
      double sum = 0.0;
      for (std::uint64_t t = 2; t <= T; ++t) {
        sum += std::log(kE + std::log(theta * double(t))) / double(t);
      }
      const double rhs =
          std::log(double(T)) * std::log(kE + std::log(theta * double(T)));
      tracker.observe_lazy(rhs - sum, [&] {
        return std::vector<std::pair<std::string, double>>{
            {"theta", theta}, {"T", double(T)}, {"lhs", sum}, {"rhs", rhs}};
      });
    }
  }
  return tracker.result(
      "sum_{t=2}^T log(e+log th t)/t <= log T log(e + log th T)");
}

// RK4 on dp/dt = -a D p^2 against p0 / (1 + a D p0 t); relative error 1e-9.
CheckResult heuristic_ode(std::size_t n, RngStream& rng) {
  MarginTracker tracker("heuristic_ode", 0.0);
  const std::size_t cases = std::max<std::size_t>(10, n / 100);
  for (std::size_t c = 0; c < cases; ++c) {
    const double a = log_uniform(rng, 1e-3, 0.5);
    const double d = 0.01 + 0.99 * rng.uniform();
    const double p0 = 0.01 + 0.98 * rng.uniform();
    const double k = a * d;
    const double dt = 0.05;
    const int steps = 20000;
    double p = p0;
    auto f = [k](double x) { return -k * x * x; };
    double worst = 0.0;
    for (int s = 1; s <= steps; ++s) {
      const double k1 = f(p);
      const double k2 = f(p + 0.5 * dt * k1);
      const double k3 = f(p + 0.5 * dt * k2);
      const double k4 = f(p + dt * k3);
      p += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      const double exact = p0 / (1.0 + k * p0 * dt * s);
      worst = std::max(worst, std::abs(p - exact) / exact);
    }
    tracker.observe_lazy(1e-9 - worst, [&] {
      return std::vector<std::pair<std::string, double>>{
          {"alpha", a}, {"gap", d}, {"p0", p0}, {"rel_err", worst}};
    });
  }
  return tracker.result("p(t) = p0/(1 + alpha D p0 t) solves the drift ODE");
}

double recursion_step(double q, double eta, double theta,
                      RecursionVariant variant) {
  switch (variant) {
    case RecursionVariant::Plain:
      return q - eta * q * q;
    case RecursionVariant::LogCooling:
      return q - eta * q * q / (1.0 - std::log(theta * q));
    case RecursionVariant::LogLogCooling:
      return q - eta * q * q / std::log(kE - std::log(theta * q));
  }
  return q;
}

}  // namespace

double lambert_w(double y) {
  if (!(y >= kE)) throw std::domain_error("lambert_w: need y >= e");
  if (std::isinf(y)) return y;
  const double ly = std::log(y);
  double w = ly - std::log(ly);
  for (int i = 0; i < 100; ++i) {
    const double ew = std::exp(w);
    const double step = (w * ew - y) / (ew * (w + 1.0));
    w -= step;
    if (std::abs(step) <= 4 * std::numeric_limits<double>::epsilon() * w) break;
  }
  return w;
}

Report check_inequality_suite(std::size_t resolution, std::uint64_t seed) {
  if (resolution < 100) {
    throw std::invalid_argument("inequality suite needs resolution >= 100");
  }
  RngStream rng(seed);
  Report r;
  r.suite = "inequalities";
  r.checks.push_back(lambert_lower(resolution));
  r.checks.push_back(lambert_footnote(resolution));
  r.checks.push_back(log_ratio(resolution));
  r.checks.push_back(harmonic_abc(resolution, rng));
  r.checks.push_back(log_over_t_sum(resolution));
  r.checks.push_back(loglog_sum(resolution));
  r.checks.push_back(heuristic_ode(resolution, rng));
  return r;
}

const char* to_string(RecursionVariant v) {
  switch (v) {
    case RecursionVariant::Plain:
      return "plain";
    case RecursionVariant::LogCooling:
      return "log_cooling";
    case RecursionVariant::LogLogCooling:
      return "loglog_cooling";
  }
  return "?";
}

RecursionOutcome check_recursion_bounds(double q0, double eta, double theta,
                                        std::uint64_t horizon,
                                        RecursionVariant variant) {
  if (!(q0 > 0.0 && q0 < 1.0)) {
    throw std::invalid_argument("recursion: q0 must lie in (0,1)");
  }
  if (!(eta > 0.0) || !(eta * q0 < 1.0)) {
    throw std::invalid_argument("recursion: need eta > 0 and eta q0 < 1");
  }
  const double T = static_cast<double>(horizon);
  double bound = 0.0;
  if (variant == RecursionVariant::Plain) {
    bound = q0 / (1.0 + eta * q0 * T);
  } else {
    if (!(theta > 0.0) || !(theta * q0 <= 1.0)) {
      throw std::invalid_argument("recursion: need theta > 0, theta q0 <= 1");
    }
    const double ratio = eta * T / theta;
    if (variant == RecursionVariant::LogCooling) {
      if (!(ratio >= kE)) {
        throw std::invalid_argument("recursion: need eta T / theta >= e");
      }
      bound = std::log(ratio) / (eta * T);
    } else {
      if (!(ratio >= 1.0)) {
        throw std::invalid_argument("recursion: need eta T / theta >= 1");
      }
      bound = std::log(kE + std::log(ratio)) / (eta * T);
    }
  }
  double q = q0;
  for (std::uint64_t t = 0; t < horizon; ++t) {
    q = recursion_step(q, eta, theta, variant);
  }
  return {q, bound, q <= bound + kSlack};
}

Report check_random_recursions(std::size_t cases, std::uint64_t seed) {
  Report r;
  r.suite = "recursions";
  RngStream rng(seed);
  for (auto variant : {RecursionVariant::Plain, RecursionVariant::LogCooling,
                       RecursionVariant::LogLogCooling}) {
    MarginTracker tracker(std::string("recursion_") + to_string(variant),
                          kSlack);
    for (std::size_t c = 0; c < cases; ++c) {
      const double q0 = 0.001 + 0.998 * rng.uniform();
      const double eta = log_uniform(rng, 0.01, 0.999);
      double theta = 1.0;
      std::uint64_t T = 0;
      if (variant == RecursionVariant::Plain) {
        T = rng.below(10001);
      } else {
        theta = log_uniform(rng, 0.05, std::min(20.0, 1.0 / q0));
        const double need = variant == RecursionVariant::LogCooling ? kE : 1.0;
        const auto t_min =
            static_cast<std::uint64_t>(std::ceil(need * theta / eta));
        T = t_min + static_cast<std::uint64_t>(log_uniform(rng, 1.0, 1e4)) - 1;
      }
      const RecursionOutcome out =
          check_recursion_bounds(q0, eta, theta, T, variant);
      tracker.observe_lazy(out.bound - out.final_q, [&] {
        return std::vector<std::pair<std::string, double>>{
            {"q0", q0}, {"eta", eta}, {"theta", theta}, {"T", double(T)},
            {"q_T", out.final_q}, {"bound", out.bound}};
      });
    }
    r.checks.push_back(tracker.result(std::to_string(cases) +
                                      " random admissible cases"));
  }
  return r;
}

CheckResult check_function_shape(const std::string& name,
                                 const std::function<double(double)>& gamma,
                                 std::size_t grid) {
  if (grid < 3) throw std::invalid_argument("shape check needs grid >= 3");
  std::vector<double> g(grid);
  const double h = 1.0 / static_cast<double>(grid + 1);
  for (std::size_t k = 0; k < grid; ++k) g[k] = gamma(h * double(k + 1));
  MarginTracker first(name, 1e-12);
  MarginTracker second(name, 1e-12);
  for (std::size_t k = 0; k + 1 < grid; ++k) {
    const double d1 = g[k + 1] - g[k];
    first.observe_lazy(d1, [&] {
      return std::vector<std::pair<std::string, double>>{
          {"p", h * double(k + 1)}, {"first_difference", d1}};
    });
    if (k > 0) {
      const double d2 = g[k + 1] - 2.0 * g[k] + g[k - 1];
      second.observe_lazy(d2, [&] {
        return std::vector<std::pair<std::string, double>>{
            {"p", h * double(k + 1)}, {"second_difference", d2}};
      });
    }
  }
  CheckResult a = first.result();
  CheckResult b = second.result();
  CheckResult& worse = (a.failed() || (!b.failed() && a.worst_margin <= b.worst_margin)) ? a : b;
  worse.status =
      a.failed() || b.failed() ? CheckStatus::Fail : CheckStatus::Pass;
  worse.evaluations = grid;
  worse.detail = "gamma increasing and convex on a " + std::to_string(grid) +
                 "-point grid of (0,1)";
  return worse;
}

CheckResult check_schedule_shape(const Schedule& schedule, std::size_t grid) {
  return check_function_shape("shape:" + schedule.label(),
                              [&](double p) { return schedule.gamma(p); },
                              grid);
}

UpdateRule default_update_rule() {
  return [](std::vector<double>& probs, const Schedule& schedule, Arm leader,
            Arm played, int reward) {
    samba_update_in_place(probs, schedule, leader, played, reward);
  };
}

double drift_bound(const BanditInstance& instance, const Schedule& schedule,
                   double q) {
  const auto gap = instance.min_gap();
  if (!gap) throw std::invalid_argument("drift bound needs a unique optimum");
  const double n = static_cast<double>(instance.num_arms());
  const double d = *gap;
  switch (schedule.kind()) {
    case ScheduleKind::Fixed:
      return -schedule.parameter() * d * q * q / n;
    case ScheduleKind::LogCooling:
      return -(schedule.parameter() * d / n) * q * q / (1.0 - std::log(q / n));
    case ScheduleKind::LogLogCooling:
      return -(schedule.parameter() * d / n) * q * q /
             std::log(kE - std::log(q / n));
    case ScheduleKind::SlowlyVarying:
      return q == 0.0 ? 0.0 : -d * (n - 1.0) * schedule.gamma(q / (n - 1.0));
  }
  return 0.0;
}

DriftReport estimate_drift(const BanditInstance& instance,
                           const Schedule& schedule,
                           std::span<const double> state,
                           const UpdateRule& rule) {
  if (instance.degenerate()) {
    throw std::invalid_argument("drift: instance needs Delta > 0");
  }
  const std::size_t n = instance.num_arms();
  if (state.size() != n) {
    throw std::invalid_argument("drift: state size does not match instance");
  }
  const Arm best = instance.optimal_arm();
  for (Arm a = 0; a < n; ++a) {
    if (a != best && !(state[a] < state[best])) {
      throw std::invalid_argument("drift: leading arm is not the optimal arm");
    }
  }
  DriftReport out;
  out.state.assign(state.begin(), state.end());
  for (Arm a = 0; a < n; ++a) {
    if (a != best) out.q += state[a];
  }

  double drift = 0.0;
  double magnitude = 0.0;
  std::vector<double> next(n);
  for (Arm played = 0; played < n; ++played) {
    const double weight = state[played] * instance.mean(played);
    if (weight == 0.0) continue;  // reward 0 or never played: no movement
    next.assign(state.begin(), state.end());
    rule(next, schedule, best, played, 1);
    double q_next = 0.0;
    for (Arm a = 0; a < n; ++a) {
      if (a != best) q_next += next[a];
    }
    drift += weight * (q_next - out.q);
    magnitude += weight * (std::abs(q_next) + out.q);
  }
  out.drift = drift;
  out.stderr_ = 4.0 * double(n) * std::numeric_limits<double>::epsilon() * magnitude;

  for (Arm a = 0; a < n; ++a) {
    if (a == best || state[a] <= 0.0) continue;
    out.closed_form += schedule.gamma(state[a]) *
                       (instance.mean(a) - instance.optimal_mean());
  }
  out.bound = drift_bound(instance, schedule, out.q);
  out.pass = out.drift <= out.bound + 3.0 * out.stderr_;
  return out;
}

std::vector<double> EmbeddedChainTrace::reconstruct() const {
  std::vector<double> out(length);
  for (std::size_t s = 0; s < times.size(); ++s) out[times[s]] = values[s];
  for (const auto& e : excursions) {
    std::copy(e.values.begin(), e.values.end(), out.begin() + e.sigma);
  }
  return out;
}

EmbeddedChainTrace embedded_chain(std::span<const double> q) {
  EmbeddedChainTrace trace;
  trace.length = q.size();
  bool inside = false;
  for (std::size_t t = 0; t < q.size(); ++t) {
    if (q[t] < 0.5) {
      if (inside) {
        trace.excursions.back().tau = t;
        inside = false;
      }
      trace.times.push_back(t);
      trace.values.push_back(q[t]);
    } else {
      if (!inside) {
        trace.excursions.push_back({t, q.size(), {}});
        inside = true;
      }
      trace.excursions.back().values.push_back(q[t]);
    }
  }
  return trace;
}

EmbeddedSampler::EmbeddedSampler(std::vector<std::uint64_t> s_points)
    : points_(std::move(s_points)),
      samples_(points_.size(), std::numeric_limits<double>::quiet_NaN()) {
  if (!std::is_sorted(points_.begin(), points_.end())) {
    throw std::invalid_argument("embedded s points must be sorted");
  }
}

void EmbeddedSampler::push(double q) {
  if (!(q < 0.5)) return;
  while (next_ < points_.size() && points_[next_] == s_) {
    samples_[next_++] = q;
  }
  ++s_;
}

double embedded_bound_fixed(std::size_t n_arms, double alpha, double delta,
                            double s) {
  const double n = static_cast<double>(n_arms);
  return n / (2.0 * n + alpha * delta * s);
}

double embedded_bound_cooling(std::size_t n_arms, double beta, double delta,
                              double s) {
  const double x = s * beta * delta;
  return static_cast<double>(n_arms) / x * std::log(x);
}

Report embedded_decay_check(const std::vector<std::vector<double>>& samples,
                            std::span<const std::uint64_t> s_points,
                            const std::function<double(double)>& bound,
                            std::size_t min_reps) {
  Report r;
  r.suite = "embedded";
  for (std::size_t k = 0; k < s_points.size(); ++k) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& rep : samples) {
      if (k < rep.size() && std::isfinite(rep[k])) {
        sum += rep[k];
        ++count;
      }
    }
    const double s = static_cast<double>(s_points[k]);
    CheckResult c;
    c.name = "embedded_decay(s=" + std::to_string(s_points[k]) + ")";
    c.evaluations = count;
    const double b = bound(s);
    if (count < std::max<std::size_t>(min_reps, 2)) {
      c.status = CheckStatus::Inconclusive;
      c.detail = "only " + std::to_string(count) + " replications reached s";
      c.worst_point = {{"s", s}, {"bound", b}, {"reached", double(count)}};
      r.checks.push_back(std::move(c));
      continue;
    }
    const double mean = sum / double(count);
    double ss = 0.0;
    for (const auto& rep : samples) {
      if (k < rep.size() && std::isfinite(rep[k])) {
        ss += (rep[k] - mean) * (rep[k] - mean);
      }
    }
    const double se = std::sqrt(ss / double(count - 1)) / std::sqrt(double(count));
    c.worst_margin = b + 3.0 * se - mean;
    c.status = c.worst_margin >= -kSlack ? CheckStatus::Pass : CheckStatus::Fail;
    c.detail = "mean q_hat " + fmt("%.6g", mean) + " <= bound " +
               fmt("%.6g", b) + " + 3 se (se " + fmt("%.3g", se) + ", n " +
               std::to_string(count) + ")";
    c.worst_point = {{"s", s}, {"mean", mean}, {"se", se}, {"bound", b}};
    r.checks.push_back(std::move(c));
  }
  return r;
}

void TransienceCounter::merge(const TransienceCounter& other) {
  if (other.counts_.size() != counts_.size()) {
    throw std::invalid_argument("transience counters differ in horizon");
  }
  for (std::size_t t = 0; t < counts_.size(); ++t) counts_[t] += other.counts_[t];
  reps_ += other.reps_;
}

std::vector<double> TransienceCounter::partial_sums() const {
  std::vector<double> out(counts_.size(), 0.0);
  if (reps_ == 0) return out;
  const double r = static_cast<double>(reps_);
  double acc = 0.0;
  for (std::size_t t = 0; t < counts_.size(); ++t) {
    acc += static_cast<double>(counts_[t]) / r;
    out[t] = acc;
  }
  return out;
}

QEstimate estimate_Q(const TransienceCounter& counter,
                     double plateau_fraction) {
  QEstimate q;
  q.partial_sums = counter.partial_sums();
  const std::uint64_t T = counter.horizon();
  q.total = q.partial_sums[T];
  q.tail_increment = q.total - q.partial_sums[T / 2];
  CheckResult& c = q.plateau;
  c.name = "transience_plateau";
  c.evaluations = counter.replications();
  c.worst_margin = plateau_fraction * q.total - q.tail_increment;
  c.worst_point = {{"Q_hat_T", q.total},
                   {"tail_increment", q.tail_increment},
                   {"T", double(T)},
                   {"replications", double(counter.replications())}};
  c.detail = "Q_hat(T) - Q_hat(T/2) <= " + fmt("%g", plateau_fraction) +
             " Q_hat(T)";
  if (counter.replications() < 100) {
    c.status = CheckStatus::Inconclusive;
    c.detail += " (fewer than 100 replications)";
  } else {
    c.status = c.worst_margin >= 0.0 ? CheckStatus::Pass : CheckStatus::Fail;
  }
  return q;
}

QEstimate estimate_Q(const std::vector<std::vector<double>>& trajectories,
                     double plateau_fraction) {
  if (trajectories.empty() || trajectories.front().empty()) {
    throw std::invalid_argument("estimate_Q: no trajectories");
  }
  const std::size_t len = trajectories.front().size();
  TransienceCounter counter(len - 1);
  for (const auto& traj : trajectories) {
    if (traj.size() != len) {
      throw std::invalid_argument("estimate_Q: trajectories differ in length");
    }
    for (std::size_t t = 0; t < len; ++t) counter.push(t, traj[t]);
    counter.end_replication();
  }
  return estimate_Q(counter, plateau_fraction);
}

}  // namespace samba::theory
