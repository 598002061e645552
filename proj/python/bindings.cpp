#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "samba/bandit.hpp"
#include "samba/config.hpp"
#include "samba/errors.hpp"
#include "samba/harness.hpp"
#include "samba/policy.hpp"
#include "samba/schedule.hpp"
#include "samba/theory.hpp"
#include "samba/verify.hpp"

namespace py = pybind11;
using namespace samba;

namespace {

py::dict row_dict(const MetricsRow& r) {
  py::dict d;
  d["agent"] = r.agent;
  d["instance"] = r.instance;
  d["t"] = r.t;
  d["pseudo_regret_mean"] = r.pseudo_regret_mean;
  d["pseudo_regret_se"] = r.pseudo_regret_se;
  d["realized_regret_mean"] = r.realized_regret_mean;
  d["p_optimal_mean"] = r.p_optimal_mean;
  d["p_suboptimal_play"] = r.p_suboptimal_play;
  d["runs"] = r.runs;
  return d;
}

std::vector<ExperimentConfig> parse_text(const std::string& text,
                                         std::optional<std::uint64_t> seed) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(), "config");
  }
  return parse_config(j, seed);
}

// Runs every experiment in a JSON config; returns {name: [row, ...]}.
py::dict run_config(const std::string& text, std::optional<std::uint64_t> seed,
                    unsigned jobs) {
  const auto experiments = parse_text(text, seed);
  std::vector<MetricsTable> tables;
  {
    py::gil_scoped_release release;
    for (const auto& c : experiments) tables.push_back(run_experiment(c, jobs));
  }
  py::dict out;
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    py::list rows;
    for (const auto& r : tables[i].rows) rows.append(row_dict(r));
    out[py::str(experiments[i].name)] = rows;
  }
  return out;
}

std::string run_config_csv(const std::string& text, std::optional<std::uint64_t> seed,
                           unsigned jobs) {
  const auto experiments = parse_text(text, seed);
  std::ostringstream csv;
  py::gil_scoped_release release;
  for (const auto& c : experiments) write_csv(csv, run_experiment(c, jobs));
  return csv.str();
}

std::vector<double> update(std::vector<double> probs, const Schedule& schedule,
                           Arm leader, Arm played, int reward) {
  samba_update_in_place(probs, schedule, leader, played, reward);
  return probs;
}

std::string verify_json(const std::string& suite, std::uint64_t seed, double scale,
                        unsigned jobs) {
  VerifyOptions o;
  o.seed = seed;
  o.scale = scale;
  o.jobs = jobs;
  py::gil_scoped_release release;
  return run_verify_suite(suite, o).to_json().dump();
}

}  // namespace

PYBIND11_MODULE(_samba, m) {
  m.doc() = "SAMBA bandit algorithm, baselines, experiment harness and theory checks";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<BanditInstance>(m, "BanditInstance")
      .def(py::init<std::vector<double>>(), py::arg("means"))
      .def_property_readonly("means", &BanditInstance::means)
      .def_property_readonly("gaps", &BanditInstance::gaps)
      .def_property_readonly("optimal_arm", &BanditInstance::optimal_arm)
      .def_property_readonly("optimal_mean", &BanditInstance::optimal_mean)
      .def_property_readonly("min_gap", &BanditInstance::min_gap)
      .def_property_readonly("degenerate", &BanditInstance::degenerate)
      .def("pseudo_regret", [](const BanditInstance& b, Arm a) {
        return per_step_pseudo_regret(b, a);
      });

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", &RngStream::uniform)
      .def("below", &RngStream::below)
      .def_property_readonly("seed", &RngStream::seed);

  py::class_<Schedule>(m, "Schedule")
      .def_static("fixed", &Schedule::fixed, py::arg("alpha"))
      .def_static("log_cooling", &Schedule::log_cooling, py::arg("beta"),
                  py::arg("unvalidated") = false)
      .def_static("loglog_cooling", &Schedule::loglog_cooling, py::arg("beta"),
                  py::arg("unvalidated") = false)
      .def_static("slowly_varying",
                  py::overload_cast<std::string_view, double>(&Schedule::slowly_varying),
                  py::arg("l"), py::arg("tol") = 1e-10)
      .def("alpha", &Schedule::alpha, py::arg("p"))
      .def("gamma", &Schedule::gamma, py::arg("p"))
      .def_property_readonly("label", &Schedule::label)
      .def_property_readonly("parameter", &Schedule::parameter)
      .def("__repr__", [](const Schedule& s) { return "<Schedule " + s.label() + ">"; });

  m.def("alpha_threshold", &alpha_threshold, py::arg("r_star"), py::arg("delta"));
  m.def("gamma_from_l", &gamma_from_l, py::arg("l"), py::arg("p"), py::arg("tol") = 1e-10);
  m.def("leading_arm",
        [](const std::vector<double>& p, RngStream& rng) { return leading_arm(p, rng); });
  m.def("samba_select",
        [](const std::vector<double>& p, RngStream& rng) { return samba_select(p, rng); });
  m.def("samba_update", &update, py::arg("probs"), py::arg("schedule"), py::arg("leader"),
        py::arg("played"), py::arg("reward"));
  m.def("snapshot_grid", &snapshot_grid, py::arg("horizon"), py::arg("n_points"));
  m.def("lambert_w", &theory::lambert_w, py::arg("y"));
  m.def("embedded_bound_fixed", &theory::embedded_bound_fixed);

  m.def(
      "estimate_drift",
      [](const BanditInstance& b, const Schedule& s, const std::vector<double>& state) {
        const auto d = theory::estimate_drift(b, s, state);
        py::dict out;
        out["q"] = d.q;
        out["drift"] = d.drift;
        out["closed_form"] = d.closed_form;
        out["bound"] = d.bound;
        out["passed"] = d.pass;
        return out;
      },
      py::arg("instance"), py::arg("schedule"), py::arg("state"));

  m.def("run_config", &run_config, py::arg("config_json"), py::arg("seed") = py::none(),
        py::arg("jobs") = 1u);
  m.def("run_config_csv", &run_config_csv, py::arg("config_json"),
        py::arg("seed") = py::none(), py::arg("jobs") = 1u);
  m.def("verify_json", &verify_json, py::arg("suite"), py::arg("seed") = 0,
        py::arg("scale") = 1.0, py::arg("jobs") = 1u);

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
