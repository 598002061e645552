#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace samba {

enum class CheckStatus { Pass, Fail, Inconclusive, Info };

const char* to_string(CheckStatus s);

// Outcome of one named check. `worst_point` names the coordinates of the
// evaluation with the smallest margin (rhs - lhs, or bound - value).
struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
  double worst_margin = 0.0;
  std::vector<std::pair<std::string, double>> worst_point;
  std::size_t evaluations = 0;

  bool failed() const { return status == CheckStatus::Fail; }
};

struct Report {
  std::string suite;
  std::vector<CheckResult> checks;

  // True when no check failed. Inconclusive and info entries do not fail a
  // report.
  bool passed() const;
  bool has_inconclusive() const;
  void append(const Report& other);

  // One line per check: "PASS  name  detail  [worst: k=v ...]".
  std::string to_text() const;
  nlohmann::json to_json() const;
};

// Tracks the smallest margin seen across evaluations of a check.
class MarginTracker {
 public:
  explicit MarginTracker(std::string name, double slack)
      : name_(std::move(name)), slack_(slack) {}

  void observe(double margin,
               std::vector<std::pair<std::string, double>> point);
  // Overload that only builds the point when the margin is a new minimum.
  template <typename PointFn>
  void observe_lazy(double margin, PointFn&& point) {
    ++count_;
    if (first_ || margin < worst_ || margin != margin) {
      first_ = false;
      worst_ = margin;
      point_ = point();
    }
  }

  CheckResult result(std::string detail = {}) const;

 private:
  std::string name_;
  double slack_;
  bool first_ = true;
  double worst_ = 0.0;
  std::vector<std::pair<std::string, double>> point_;
  std::size_t count_ = 0;
};

}  // namespace samba
