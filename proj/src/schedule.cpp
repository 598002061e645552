#include "samba/schedule.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "samba/errors.hpp"
#include "samba/quadrature.hpp"

namespace samba {
namespace {

constexpr double kE = std::numbers::e;

void check_p(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::domain_error("schedule evaluated outside 0 < p <= 1");
  }
}

double checked_l(const SlowlyVaryingFn& l, double u) {
  const double v = l(u);
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error("slowly varying function left [0,1] at u=" +
                            std::to_string(u));
  }
  return v;
}

double limit_at_zero(const SlowlyVaryingFn& l) {
  double last = std::numeric_limits<double>::quiet_NaN();
  for (double u = 1e-10; u >= 1e-300; u *= 1e-10) {
    const double v = l(u);
    if (std::isfinite(v)) last = v;
  }
  if (!std::isfinite(last)) {
    throw std::domain_error("slowly varying function has no finite l(0+)");
  }
  if (!(last >= 0.0 && last <= 1.0)) {
    throw std::domain_error("slowly varying function left [0,1] near 0");
  }
  return last;
}

// gamma(p) = int_0^p (p - u) l(u) du, the double integral with the order of
// integration swapped, by tanh-sinh quadrature (relative tolerance tol).
// Tanh-sinh never samples the endpoints, so the slow variation of l at 0
// costs nothing extra.
double gamma_single_integral(const SlowlyVaryingFn& l, double l0, double p,
                             double tol) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  const auto f = [&](double u) { return (p - u) * (u > 0.0 ? checked_l(l, u) : l0); };
  return integrator.integrate(f, 0.0, p, tol);
}

std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace

SlowlyVaryingFn builtin_slowly_varying(std::string_view name) {
  if (name == "one") return [](double) { return 1.0; };
  if (name == "zero") return [](double) { return 0.0; };
  if (name == "inv_log") {
    return [](double u) { return 1.0 / (1.0 - std::log(u)); };
  }
  if (name == "inv_loglog") {
    return [](double u) { return 1.0 / std::log(kE - std::log(u)); };
  }
  throw ConfigError("unknown slowly varying builtin '" + std::string(name) +
                        "' (expected one, zero, inv_log, inv_loglog)",
                    "l");
}

double gamma_from_l(const SlowlyVaryingFn& l, double p, double tol) {
  check_p(p);
  if (!(tol > 0.0)) throw std::invalid_argument("gamma_from_l: tol must be > 0");
  const double l0 = limit_at_zero(l);
  const std::function<double(double)> inner = [&](double u) {
    return u <= 0.0 ? l0 : checked_l(l, u);
  };
  const std::function<double(double)> outer = [&](double v) {
    return v <= 0.0 ? 0.0 : adaptive_simpson(inner, 0.0, v, 0.5 * tol);
  };
  return adaptive_simpson(outer, 0.0, p, 0.5 * tol);
}

Schedule Schedule::fixed(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError(
        "fixed learning rate must satisfy 0 < alpha < 1 (simplex positivity); "
        "the admissibility condition for convergence to the optimal arm is "
        "alpha < Delta/(r*-Delta)",
        "alpha");
  }
  Schedule s;
  s.kind_ = ScheduleKind::Fixed;
  s.param_ = alpha;
  return s;
}

Schedule Schedule::log_cooling(double beta, bool unvalidated) {
  if (!(beta > 0.0) || (!unvalidated && beta > 1.0)) {
    throw ConfigError("cooling schedule needs 0 < beta <= 1 (set "
                      "\"unvalidated\": true to go beyond 1)",
                      "beta");
  }
  Schedule s;
  s.kind_ = ScheduleKind::LogCooling;
  s.param_ = beta;
  s.unvalidated_ = unvalidated;
  return s;
}

Schedule Schedule::loglog_cooling(double beta, bool unvalidated) {
  Schedule s = log_cooling(beta, unvalidated);
  s.kind_ = ScheduleKind::LogLogCooling;
  return s;
}

Schedule Schedule::slowly_varying(SlowlyVaryingFn l, double tol,
                                  std::string l_name) {
  if (!l) throw ConfigError("slowly varying schedule needs a function", "l");
  if (!(tol > 0.0)) throw ConfigError("quadrature tol must be > 0", "tol");
  Schedule s;
  s.kind_ = ScheduleKind::SlowlyVarying;
  s.tol_ = tol;
  s.l_name_ = std::move(l_name);
  try {
    s.l0_ = limit_at_zero(l);
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what(), "l");
  }
  s.l_ = std::make_shared<const SlowlyVaryingFn>(std::move(l));
  return s;
}

Schedule Schedule::slowly_varying(std::string_view builtin, double tol) {
  return slowly_varying(builtin_slowly_varying(builtin), tol,
                        std::string(builtin));
}

double Schedule::alpha(double p) const {
  check_p(p);
  switch (kind_) {
    case ScheduleKind::Fixed:
      return param_;
    case ScheduleKind::LogCooling:
      return param_ / (1.0 - std::log(p));
    case ScheduleKind::LogLogCooling:
      return param_ / std::log(kE - std::log(p));
    case ScheduleKind::SlowlyVarying:
      return gamma(p) / (p * p);
  }
  return 0.0;
}

double Schedule::gamma(double p) const {
  if (kind_ == ScheduleKind::SlowlyVarying) {
    check_p(p);
    return gamma_single_integral(*l_, l0_, p, tol_);
  }
  return alpha(p) * p * p;
}

std::string Schedule::label() const {
  switch (kind_) {
    case ScheduleKind::Fixed:
      return "samba(alpha=" + fmt_g(param_) + ")";
    case ScheduleKind::LogCooling:
      return "samba_cooling(beta=" + fmt_g(param_) + ")";
    case ScheduleKind::LogLogCooling:
      return "samba_loglog(beta=" + fmt_g(param_) + ")";
    case ScheduleKind::SlowlyVarying:
      return "samba_sv(l=" + l_name_ + ")";
  }
  return "samba";
}

double alpha_threshold(double r_star, double delta) {
  if (!(delta > 0.0) || !(delta <= r_star) || !(r_star <= 1.0)) {
    throw std::invalid_argument("alpha_threshold needs 0 < delta <= r* <= 1");
  }
  const double denom = r_star - delta;
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return delta / denom;
}

}  // namespace samba
