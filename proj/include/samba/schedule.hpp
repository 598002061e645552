#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

namespace samba {

// A scalar function l: (0,1] -> [0,1] defining a schedule through its double
// antiderivative.
using SlowlyVaryingFn = std::function<double(double)>;

// Named builtins accepted by config files:
//   "one"         l(u) = 1
//   "zero"        l(u) = 0
//   "inv_log"     l(u) = 1 / (1 - log u)
//   "inv_loglog"  l(u) = 1 / log(e - log u)
// Throws ConfigError for an unknown name.
SlowlyVaryingFn builtin_slowly_varying(std::string_view name);

// gamma(p) = int_0^p int_0^v l(u) du dv by nested adaptive Simpson with
// absolute error tol (split evenly between the inner and outer integrals).
// At u = 0 the integrand takes l(0+), estimated as l at the smallest point of
// the grid 1e-10, 1e-20, ..., 1e-300 where it is finite.
// Throws std::domain_error if l leaves [0,1] at a sampled point and
// std::runtime_error if the quadrature does not converge.
double gamma_from_l(const SlowlyVaryingFn& l, double p, double tol = 1e-10);

enum class ScheduleKind { Fixed, LogCooling, LogLogCooling, SlowlyVarying };

// Learning-rate rule for SAMBA. The update moves arm a by
// gamma(p_a) = alpha(p_a) * p_a^2 times the importance-weighted reward
// difference.
class Schedule {
 public:
  // alpha in (0,1).
  static Schedule fixed(double alpha);
  // alpha(p) = beta / (1 - log p). beta in (0,1] unless `unvalidated`, in
  // which case any beta > 0 is accepted and the update-time alpha < 1 guard
  // is the only protection.
  static Schedule log_cooling(double beta, bool unvalidated = false);
  // alpha(p) = beta / log(e - log p).
  static Schedule loglog_cooling(double beta, bool unvalidated = false);
  static Schedule slowly_varying(SlowlyVaryingFn l, double tol = 1e-10,
                                 std::string l_name = "custom");
  static Schedule slowly_varying(std::string_view builtin, double tol = 1e-10);

  ScheduleKind kind() const { return kind_; }
  // alpha for Fixed, beta for the cooling schedules, 0 otherwise.
  double parameter() const { return param_; }
  double tolerance() const { return tol_; }
  const std::string& l_name() const { return l_name_; }
  bool unvalidated() const { return unvalidated_; }

  // Both throw std::domain_error unless 0 < p <= 1. For slowly varying
  // schedules gamma is the single integral int_0^p (p - u) l(u) du by
  // tanh-sinh quadrature with relative tolerance `tolerance()`; it agrees
  // with gamma_from_l to that tolerance and is far cheaper per call.
  double alpha(double p) const;
  double gamma(double p) const;

  // Short label such as "samba(alpha=0.1)".
  std::string label() const;

 private:
  Schedule() = default;

  ScheduleKind kind_ = ScheduleKind::Fixed;
  double param_ = 0.0;
  double tol_ = 0.0;
  double l0_ = 0.0;
  bool unvalidated_ = false;
  std::string l_name_;
  std::shared_ptr<const SlowlyVaryingFn> l_;
};

// Admissibility threshold for a fixed rate, Delta / (r* - Delta). Returns
// +infinity when r* == Delta. Throws std::invalid_argument unless
// 0 < delta <= r_star <= 1.
double alpha_threshold(double r_star, double delta);

}  // namespace samba
