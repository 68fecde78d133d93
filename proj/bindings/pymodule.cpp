#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uavharvest/experiments.hpp"
#include "uavharvest/metrics.hpp"
#include "uavharvest/optimize.hpp"
#include "uavharvest/sim.hpp"
#include "uavharvest/transport.hpp"

namespace py = pybind11;
using namespace uavharvest;

PYBIND11_MODULE(_core, m) {
  m.doc() = "UAV data-harvesting network performance: analytic formulas and "
            "their Monte Carlo verification";

  py::register_exception<ConfigError>(m, "ConfigError");

  py::enum_<GridMode>(m, "GridMode")
      .value("ONE_D", GridMode::OneD)
      .value("TWO_D", GridMode::TwoD);

  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def(py::init<>())
      .def_readwrite("lambda_", &NetworkConfig::lambda)
      .def_readwrite("mu", &NetworkConfig::mu)
      .def_readwrite("nu", &NetworkConfig::nu)
      .def_readwrite("h", &NetworkConfig::h)
      .def_readwrite("w", &NetworkConfig::w)
      .def_readwrite("l", &NetworkConfig::l)
      .def_readwrite("v", &NetworkConfig::v)
      .def_readwrite("alpha", &NetworkConfig::alpha)
      .def_readwrite("m", &NetworkConfig::m)
      .def_readwrite("omega", &NetworkConfig::omega)
      .def_readwrite("p", &NetworkConfig::p)
      .def_readwrite("tau", &NetworkConfig::tau)
      .def_readwrite("noise", &NetworkConfig::noise)
      .def_readwrite("mode", &NetworkConfig::mode)
      .def("validate", &NetworkConfig::validate)
      .def("occupancy", &NetworkConfig::occupancy)
      .def("__repr__",
           [](const NetworkConfig& c) { return emit_config(c); });

  m.def("load_config", &load_config, py::arg("json_text"));
  m.def("load_config_file", &load_config_file, py::arg("path"));
  m.def("emit_config", &emit_config, py::arg("config"));
  m.def("apply_param_override", &apply_param_override, py::arg("config"),
        py::arg("key_value"));

  py::class_<ModulationRule>(m, "ModulationRule")
      .def_static("fixed", &ModulationRule::fixed, py::arg("order"))
      .def_static("derived", &ModulationRule::derived)
      .def("order_for", &ModulationRule::order_for, py::arg("tau"))
      .def("bits_per_symbol", &ModulationRule::bits_per_symbol, py::arg("tau"));

  py::class_<ErrorBudget>(m, "ErrorBudget")
      .def_readonly("quadrature", &ErrorBudget::quadrature)
      .def_readonly("truncation", &ErrorBudget::truncation)
      .def("total", &ErrorBudget::total);

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("value", &Estimate::value)
      .def_readonly("budget", &Estimate::budget)
      .def("__float__", [](const Estimate& e) { return e.value; })
      .def("__repr__", [](const Estimate& e) {
        return "Estimate(" + units::format_double(e.value) + " +- " +
               units::format_double(e.value * e.budget.total()) + ")";
      });

  py::class_<LaplaceEvaluator>(m, "LaplaceEvaluator")
      .def(py::init([](const NetworkConfig& cfg, bool exclude_center,
                       double epsilon, long k_max) {
             LaplaceEvaluator::Options opt;
             opt.exclude_center = exclude_center;
             opt.truncation.epsilon = epsilon;
             opt.truncation.k_max = k_max;
             return LaplaceEvaluator(cfg, opt);
           }),
           py::arg("config"), py::arg("exclude_center") = false,
           py::arg("epsilon") = 1e-10, py::arg("k_max") = 100000)
      .def("value", &LaplaceEvaluator::value, py::arg("s"))
      .def("value_with_noise", &LaplaceEvaluator::value_with_noise,
           py::arg("s"), py::arg("noise_w"))
      .def("derivative_sum", &LaplaceEvaluator::derivative_sum, py::arg("s"),
           py::arg("order"), py::arg("noise_w") = 0.0)
      .def("factor", &LaplaceEvaluator::factor, py::arg("s"), py::arg("i"),
           py::arg("j") = 0)
      .def("truncation_index", &LaplaceEvaluator::truncation_index,
           py::arg("s"));

  m.def("coverage_probability",
        [](const NetworkConfig& c) { return coverage_probability(c); },
        py::arg("config"));
  m.def("conditional_coverage",
        [](const NetworkConfig& c) { return conditional_coverage(c); },
        py::arg("config"));
  m.def("mean_rate",
        [](const NetworkConfig& c, const ModulationRule& mod) {
          return mean_rate(c, mod);
        },
        py::arg("config"), py::arg("modulation"));
  m.def("harvested_data",
        [](const NetworkConfig& c, const ModulationRule& mod) {
          return harvested_data(c, mod);
        },
        py::arg("config"), py::arg("modulation"));
  m.def("coverage_probability_2d",
        [](const NetworkConfig& c) { return coverage_probability_2d(c); },
        py::arg("config"));
  m.def("mean_rate_2d",
        [](const NetworkConfig& c, const ModulationRule& mod) {
          return mean_rate_2d(c, mod);
        },
        py::arg("config"), py::arg("modulation"));

  py::class_<Scenario>(m, "Scenario")
      .def(py::init([](const NetworkConfig& cfg, std::uint64_t seed,
                       int k_sim) {
             return Scenario{cfg, seed, k_sim};
           }),
           py::arg("config"), py::arg("seed") = kDefaultSeed,
           py::arg("k_sim") = 64)
      .def_readwrite("cfg", &Scenario::cfg)
      .def_readwrite("seed", &Scenario::seed)
      .def_readwrite("k_sim", &Scenario::k_sim);

  py::class_<SimEstimate>(m, "SimEstimate")
      .def_readonly("metric", &SimEstimate::metric)
      .def_readonly("mean", &SimEstimate::mean)
      .def_readonly("std_error", &SimEstimate::std_error)
      .def_readonly("trials", &SimEstimate::trials)
      .def_readonly("seed", &SimEstimate::seed)
      .def_readonly("note", &SimEstimate::note)
      .def("ci95_halfwidth", &SimEstimate::ci95_halfwidth);

  m.def("coverage_estimate", &coverage_estimate, py::arg("scenario"),
        py::arg("trials"));
  m.def("empirical_laplace",
        [](const Scenario& sc, const std::vector<double>& grid, long trials,
           bool exclude_center) {
          return empirical_laplace(sc, grid, trials, exclude_center);
        },
        py::arg("scenario"), py::arg("s_grid"), py::arg("trials"),
        py::arg("exclude_center") = false);
  m.def("harvest_passage_estimate", &harvest_passage_estimate,
        py::arg("scenario"), py::arg("slot_duration_s"), py::arg("trials"),
        py::arg("modulation"));

  py::class_<SweepPoint>(m, "SweepPoint")
      .def_readonly("param", &SweepPoint::param)
      .def_readonly("value", &SweepPoint::value);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("points", &SweepResult::points)
      .def_readonly("argmax_index", &SweepResult::argmax_index)
      .def_readonly("ambiguous_tie", &SweepResult::ambiguous_tie)
      .def_readonly("non_unimodal", &SweepResult::non_unimodal)
      .def_readonly("zero_objective", &SweepResult::zero_objective);

  py::class_<OptimizeResult>(m, "OptimizeResult")
      .def_readonly("w_star", &OptimizeResult::w_star)
      .def_readonly("objective", &OptimizeResult::objective)
      .def_readonly("sweep", &OptimizeResult::sweep);

  m.def("window_objective",
        [](const NetworkConfig& c, double w) { return window_objective(c, w); },
        py::arg("config"), py::arg("w"));
  m.def("optimize_window",
        [](const NetworkConfig& c, double tol, int grid) {
          return optimize_window(c, tol, grid);
        },
        py::arg("config"), py::arg("tolerance_m") = 1.0,
        py::arg("grid_points") = 32);

  py::class_<TransportReport>(m, "TransportReport")
      .def_readonly("harvested", &TransportReport::harvested)
      .def_readonly("rate", &TransportReport::rate)
      .def_readonly("mean_devices", &TransportReport::mean_devices)
      .def_readonly("dwell_time", &TransportReport::dwell_time)
      .def_readonly("ratio", &TransportReport::ratio)
      .def_readonly("occupancy", &TransportReport::occupancy)
      .def_readonly("ratio_std_error", &TransportReport::ratio_std_error);

  m.def("check_identity_analytic",
        [](const NetworkConfig& c, const ModulationRule& mod) {
          return check_identity_analytic(c, mod);
        },
        py::arg("config"), py::arg("modulation"));
  m.def("check_identity_simulated",
        [](const Scenario& sc, const ModulationRule& mod, long trials) {
          return check_identity_simulated(sc, mod, trials);
        },
        py::arg("scenario"), py::arg("modulation"), py::arg("trials"));

  m.def("tool_version", &tool_version);
  m.attr("DEFAULT_SEED") = py::int_(kDefaultSeed);
}
