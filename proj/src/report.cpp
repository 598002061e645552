#include "samba/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace samba {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "PASS";
    case CheckStatus::Fail:
      return "FAIL";
    case CheckStatus::Inconclusive:
      return "INCONCLUSIVE";
    case CheckStatus::Info:
      return "INFO";
  }
  return "?";
}

bool Report::passed() const {
  for (const auto& c : checks) {
    if (c.failed()) return false;
  }
  return true;
}

bool Report::has_inconclusive() const {
  for (const auto& c : checks) {
    if (c.status == CheckStatus::Inconclusive) return true;
  }
  return false;
}

void Report::append(const Report& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

std::string Report::to_text() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    char margin[40];
    std::snprintf(margin, sizeof margin, "%.6g", c.worst_margin);
    out << to_string(c.status) << "  " << c.name;
    if (!c.detail.empty()) out << "  " << c.detail;
    if (!c.worst_point.empty()) {
      out << "  [worst margin " << margin << " at";
      for (const auto& [k, v] : c.worst_point) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.9g", v);
        out << ' ' << k << '=' << buf;
      }
      out << ']';
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json Report::to_json() const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json point = nlohmann::json::object();
    for (const auto& [k, v] : c.worst_point) {
      point[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
    }
    checks_json.push_back({
        {"name", c.name},
        {"status", to_string(c.status)},
        {"detail", c.detail},
        {"worst_margin", std::isfinite(c.worst_margin)
                             ? nlohmann::json(c.worst_margin)
                             : nlohmann::json(nullptr)},
        {"worst_point", point},
        {"evaluations", c.evaluations},
    });
  }
  return {{"suite", suite}, {"passed", passed()}, {"checks", checks_json}};
}

void MarginTracker::observe(double margin,
                            std::vector<std::pair<std::string, double>> point) {
  observe_lazy(margin, [&] { return std::move(point); });
}

CheckResult MarginTracker::result(std::string detail) const {
  CheckResult r;
  r.name = name_;
  r.worst_margin = worst_;
  r.worst_point = point_;
  r.evaluations = count_;
  r.detail = std::move(detail);
  const bool ok = count_ > 0 && worst_ >= -slack_;
  r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

}  // namespace samba
