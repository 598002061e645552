#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "samba/bandit.hpp"
#include "samba/report.hpp"
#include "samba/schedule.hpp"

namespace samba::theory {

// Slack allowed on every inequality comparison.
inline constexpr double kSlack = 1e-12;

// Principal branch of Lambert's W for y >= e, by Newton iteration on
// w e^w = y from w0 = log y - log log y. |W e^W - y| / y <= 1e-12.
// Throws std::domain_error for y < e.
double lambert_w(double y);

// Grid and sampled checks of the elementary inequalities behind the regret
// bounds:
//   lambert_lower      W(y) >= log(y / log y) on y in [e, 1e6]
//   log_ratio          -log(1-z)/(1-z) <= z + 4z^2 on z in [0, 1/3]
//   harmonic_abc       sum_{s<T} A/(B+Cs) <= (A/C) log T, B > 2C, T >= 2
//   log_over_t_sum     sum_{t=ceil(e/th)+1}^T log(th t)/(th t)
//                          <= (log th T)^2 / (2 th)
//   loglog_sum         sum_{t=2}^T log(e + log th t)/t
//                          <= log T log(e + log th T)
//   heuristic_ode      Euler solution of dp/dt = -a D p^2 tracks
//                      p0 / (1 + a D p0 t)
// `resolution` (>= 100) is the number of grid points or samples per check.
Report check_inequality_suite(std::size_t resolution, std::uint64_t seed = 1);

enum class RecursionVariant { Plain, LogCooling, LogLogCooling };

const char* to_string(RecursionVariant v);

struct RecursionOutcome {
  double final_q = 0.0;
  double bound = 0.0;
  bool passed = false;
};

// Iterates the equality form of the recursion T times from q0 and compares
// with the closed-form bound:
//   plain       q <- q - eta q^2                      bound q0 / (1 + eta q0 T)
//   log         q <- q - eta q^2 / (1 - log(th q))    bound log(eta T/th) / (eta T)
//   loglog      q <- q - eta q^2 / log(e - log(th q)) bound log(e + log(eta T/th)) / (eta T)
// Preconditions (std::invalid_argument): q0 in (0,1), eta > 0,
// eta q0 < 1 (keeps the sequence positive); for the cooling variants
// theta > 0, theta q0 <= 1 and eta T / theta >= e (log) or >= 1 (loglog).
RecursionOutcome check_recursion_bounds(double q0, double eta, double theta,
                                        std::uint64_t horizon,
                                        RecursionVariant variant);

// `cases` random admissible (q0, eta, theta, T) per variant.
Report check_random_recursions(std::size_t cases, std::uint64_t seed = 2);

// First and second differences of gamma on the uniform grid
// {k / (grid + 1) : k = 1..grid} must be >= -1e-12.
CheckResult check_schedule_shape(const Schedule& schedule, std::size_t grid);
CheckResult check_function_shape(const std::string& name,
                                 const std::function<double(double)>& gamma,
                                 std::size_t grid);

// Mutable update rule used by the drift enumeration. The default is
// samba_update_in_place with default options.
using UpdateRule = std::function<void(std::vector<double>& probs,
                                      const Schedule& schedule, Arm leader,
                                      Arm played, int reward)>;

UpdateRule default_update_rule();

struct DriftReport {
  std::vector<double> state;
  double q = 0.0;            // 1 - p_{a*}
  double drift = 0.0;        // exact E[q(t+1) - q(t)]
  double stderr_ = 0.0;      // rounding bound of the enumeration
  double closed_form = 0.0;  // sum_{a != a*} gamma(p_a) (r_a - r*)
  double bound = 0.0;        // supermartingale bound for the schedule
  bool pass = false;         // drift <= bound + 3 stderr
};

// Exact one-step drift of q = 1 - p_{a*} by enumerating every (arm, reward=1)
// outcome. Requires a non-degenerate instance and a* as the unique leading
// arm; throws std::invalid_argument otherwise. Bound by schedule:
//   Fixed          -alpha D q^2 / N
//   LogCooling     -(beta D / N) q^2 / (1 - log(q / N))
//   LogLogCooling  -(beta D / N) q^2 / log(e - log(q / N))
//   SlowlyVarying  -D (N - 1) gamma(q / (N - 1))
DriftReport estimate_drift(const BanditInstance& instance,
                           const Schedule& schedule,
                           std::span<const double> state,
                           const UpdateRule& rule = default_update_rule());

double drift_bound(const BanditInstance& instance, const Schedule& schedule,
                   double q);

// q = 1 - p_{a*} restricted to the times it is below 1/2. Maximal runs with
// q >= 1/2 are excursions; excursion k spans [sigma_k, tau_k) where tau_k is
// the next time q < 1/2 (or the trajectory length if it never returns).
struct Excursion {
  std::size_t sigma = 0;
  std::size_t tau = 0;
  std::vector<double> values;
};

struct EmbeddedChainTrace {
  std::vector<std::size_t> times;  // t_s for s = 0, 1, ...
  std::vector<double> values;      // q_hat(s) = q(t_s)
  std::vector<Excursion> excursions;
  std::size_t length = 0;

  bool entered() const { return !times.empty(); }
  // Splices the excursions back in; equals the input trajectory exactly.
  std::vector<double> reconstruct() const;
};

EmbeddedChainTrace embedded_chain(std::span<const double> q);

// Streaming version: records q_hat at the requested embedded times without
// storing the trajectory. NaN where the chain never reached s.
class EmbeddedSampler {
 public:
  explicit EmbeddedSampler(std::vector<std::uint64_t> s_points);

  void push(double q);
  const std::vector<double>& samples() const { return samples_; }
  std::uint64_t embedded_length() const { return s_; }
  const std::vector<std::uint64_t>& s_points() const { return points_; }

 private:
  std::vector<std::uint64_t> points_;
  std::vector<double> samples_;
  std::uint64_t s_ = 0;
  std::size_t next_ = 0;
};

// N / (2N + alpha D s)
double embedded_bound_fixed(std::size_t n_arms, double alpha, double delta,
                            double s);
// (N / (s beta D)) log(s beta D); meaningful for s beta D >= e.
double embedded_bound_cooling(std::size_t n_arms, double beta, double delta,
                              double s);

// Across replications: mean q_hat(s) <= bound(s) + 3 se at every s point.
// `samples[r][k]` is replication r's q_hat at s_points[k] (NaN if not
// reached). Fewer than `min_reps` usable replications at a point makes the
// report inconclusive instead of failing.
Report embedded_decay_check(const std::vector<std::vector<double>>& samples,
                            std::span<const std::uint64_t> s_points,
                            const std::function<double(double)>& bound,
                            std::size_t min_reps = 100);

// Accumulates, per time u, the number of replications with q(u) >= 1/2.
class TransienceCounter {
 public:
  explicit TransienceCounter(std::uint64_t horizon)
      : counts_(horizon + 1, 0) {}

  // q(0..T) of one replication, one value at a time.
  void push(std::uint64_t t, double q) {
    if (q >= 0.5) ++counts_[t];
  }
  void end_replication() { ++reps_; }
  void merge(const TransienceCounter& other);

  std::uint64_t replications() const { return reps_; }
  std::uint64_t horizon() const { return counts_.size() - 1; }
  // Q_hat(t) = sum_{u <= t} (count_u / R), t = 0..T.
  std::vector<double> partial_sums() const;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t reps_ = 0;
};

struct QEstimate {
  std::vector<double> partial_sums;
  double total = 0.0;           // Q_hat(T)
  double tail_increment = 0.0;  // Q_hat(T) - Q_hat(T/2)
  CheckResult plateau;
};

// Summability evidence: passes when the tail increment is below
// plateau_fraction * Q_hat(T). Inconclusive with fewer than 100
// replications.
QEstimate estimate_Q(const TransienceCounter& counter,
                     double plateau_fraction = 0.05);
QEstimate estimate_Q(const std::vector<std::vector<double>>& trajectories,
                     double plateau_fraction = 0.05);

}  // namespace samba::theory
