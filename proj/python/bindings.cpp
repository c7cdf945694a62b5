#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "qperc/analysis.hpp"
#include "qperc/analytic.hpp"
#include "qperc/dynamics.hpp"
#include "qperc/errors.hpp"
#include "qperc/montecarlo.hpp"
#include "qperc/params.hpp"

namespace py = pybind11;
using namespace qperc;

namespace {

Convention convention_from(const std::string& name) {
  const auto c = parse_convention(name);
  if (!c) {
    throw DomainError("unknown convention '" + name +
                      "' (expected paper_additive, independent_overlap or filter_closed_only)");
  }
  return *c;
}

std::vector<GridPoint> grid_from(const std::vector<std::pair<double, double>>& points) {
  std::vector<GridPoint> grid;
  for (auto [p, pe] : points) grid.push_back({p, pe});
  return grid;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Percolation of quantum communication clusters on a chain";

  auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DivergenceError>(m, "DivergenceError", domain.ptr());
  py::register_exception<EnumerationLimitError>(m, "EnumerationLimitError", domain.ptr());
  py::register_exception<EstimationError>(m, "EstimationError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<double, double>(), py::arg("p"), py::arg("pe"))
      .def_static("from_schmidt", &ModelParams::from_schmidt, py::arg("p"), py::arg("tau"))
      .def_property_readonly("p", &ModelParams::p)
      .def_property_readonly("pe", &ModelParams::pe)
      .def_property_readonly("tau", &ModelParams::tau_schmidt)
      .def("connectivity", &ModelParams::connectivity)
      .def("__eq__", [](const ModelParams& a, const ModelParams& b) { return a == b; })
      .def("__repr__", [](const ModelParams& a) {
        return "ModelParams(p=" + std::to_string(a.p()) + ", pe=" + std::to_string(a.pe()) + ")";
      });

  m.def("filtering_probability", &filtering_probability, py::arg("tau"));
  m.def("critical_occupation", &critical_occupation, py::arg("pe"));
  m.def(
      "cluster_weight",
      [](std::uint64_t s, double p, double pe, bool izo) {
        return cluster_weight(s, ModelParams(p, pe), izo);
      },
      py::arg("s"), py::arg("p"), py::arg("pe"), py::arg("include_zero_open") = false);
  m.def(
      "cluster_number",
      [](std::uint64_t s, double p, double pe, bool izo) {
        return cluster_number(s, ModelParams(p, pe), izo);
      },
      py::arg("s"), py::arg("p"), py::arg("pe"), py::arg("include_zero_open") = false);
  m.def(
      "mean_cluster_size",
      [](double p, double pe, bool izo) { return mean_cluster_size(ModelParams(p, pe), izo); },
      py::arg("p"), py::arg("pe"), py::arg("include_zero_open") = false);
  m.def(
      "pair_connectivity",
      [](std::uint64_t r, double p, double pe) { return pair_connectivity(r, ModelParams(p, pe)); },
      py::arg("r"), py::arg("p"), py::arg("pe"));
  m.def(
      "correlation_length", [](double p, double pe) { return correlation_length(ModelParams(p, pe)); },
      py::arg("p"), py::arg("pe"));

  py::class_<StrengthSolution>(m, "StrengthSolution")
      .def_readonly("q_open", &StrengthSolution::q_open)
      .def_readonly("q_pair", &StrengthSolution::q_pair)
      .def_readonly("product_x", &StrengthSolution::product_x)
      .def_readonly("strength", &StrengthSolution::strength_p)
      .def_property_readonly("root", [](const StrengthSolution& s) { return to_string(s.root_used); })
      .def_readonly("iterations", &StrengthSolution::iterations);

  m.def(
      "percolation_strength",
      [](double p, double pe) { return percolation_strength_closed(ModelParams(p, pe)); },
      py::arg("p"), py::arg("pe"));
  m.def(
      "percolation_strength_fixed_point",
      [](double p, double pe, double tol, std::size_t max_iterations, const std::string& scheme) {
        FixedPointScheme s = FixedPointScheme::newton;
        if (scheme == "picard") {
          s = FixedPointScheme::picard;
        } else if (scheme != "newton") {
          throw DomainError("scheme must be newton or picard");
        }
        return percolation_strength_fixed_point(ModelParams(p, pe), tol, max_iterations, s);
      },
      py::arg("p"), py::arg("pe"), py::arg("tolerance") = 1e-12,
      py::arg("max_iterations") = 1'000'000, py::arg("scheme") = "newton");

  py::class_<ScalingRelation>(m, "ScalingRelation")
      .def_readonly("name", &ScalingRelation::name)
      .def_readonly("left", &ScalingRelation::left)
      .def_readonly("right", &ScalingRelation::right)
      .def_readonly("holds", &ScalingRelation::holds)
      .def_readonly("tolerance", &ScalingRelation::tolerance);
  m.def(
      "scaling_law_audit",
      [](int dimension) { return scaling_law_audit(declared_exponents(), dimension).relations; },
      py::arg("dimension") = 1);

  m.def("derive_trial_seed", &derive_trial_seed, py::arg("master_seed"), py::arg("trial_index"));
  m.def(
      "sample_chain",
      [](std::size_t length, double p, double pe, const std::string& convention,
         std::uint64_t seed) {
        const auto sample = sample_chain(length, ModelParams(p, pe), convention_from(convention), seed);
        std::vector<int> states;
        states.reserve(sample.edge_states.size());
        for (EdgeState s : sample.edge_states) states.push_back(static_cast<int>(s));
        return states;
      },
      py::arg("length_nodes"), py::arg("p"), py::arg("pe"),
      py::arg("convention") = "paper_additive", py::arg("seed") = 1,
      "Edge states of one sampled chain: 0 closed, 1 open, 2 perfect pair.");

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("value", &Estimate::value)
      .def_readonly("std_error", &Estimate::std_error)
      .def("__repr__", [](const Estimate& e) {
        return "Estimate(" + std::to_string(e.value) + " +- " + std::to_string(e.std_error) + ")";
      });

  py::class_<SpanningEstimate>(m, "SpanningEstimate")
      .def_readonly("fraction", &SpanningEstimate::fraction)
      .def_readonly("spanning_trials", &SpanningEstimate::spanning_trials)
      .def_readonly("trials", &SpanningEstimate::trials)
      .def_readonly("std_error", &SpanningEstimate::std_error);

  py::class_<SweepRow>(m, "SweepRow")
      .def_property_readonly("p", [](const SweepRow& r) { return r.point.p; })
      .def_property_readonly("pe", [](const SweepRow& r) { return r.point.pe; })
      .def_readonly("error", &SweepRow::error)
      .def_readonly("mean_cluster_size", &SweepRow::mean_cluster_size)
      .def_readonly("mean_cluster_size_classical", &SweepRow::mean_cluster_size_classical)
      .def_readonly("order_parameter", &SweepRow::order_parameter)
      .def_readonly("spanning", &SweepRow::spanning)
      .def_readonly("pair_connectivity", &SweepRow::pair_connectivity)
      .def_readonly("connectivity_ratio", &SweepRow::connectivity_ratio);

  m.def(
      "run_sweep",
      [](const std::vector<std::pair<double, double>>& points, const std::string& convention,
         std::size_t length, std::size_t trials, std::uint64_t seed, std::size_t r_max,
         unsigned threads) {
        SweepConfig config;
        config.convention = convention_from(convention);
        config.length_nodes = length;
        config.trials = trials;
        config.master_seed = seed;
        config.r_max = r_max;
        config.threads = threads;
        const auto grid = grid_from(points);
        py::gil_scoped_release release;
        return run_sweep(grid, config).rows;
      },
      py::arg("points"), py::arg("convention") = "paper_additive", py::arg("length_nodes") = 1'000'000,
      py::arg("trials") = 50, py::arg("master_seed") = 1, py::arg("r_max") = 10,
      py::arg("threads") = 0);

  py::class_<ExactObservables>(m, "ExactObservables")
      .def_readonly("length_nodes", &ExactObservables::length_nodes)
      .def_readonly("configurations", &ExactObservables::configurations)
      .def_readonly("order_parameter", &ExactObservables::order_parameter)
      .def_readonly("spanning_probability", &ExactObservables::spanning_probability)
      .def_readonly("pair_connectivity", &ExactObservables::pair_connectivity)
      .def(
          "mean_cluster_size",
          [](const ExactObservables& e, bool restrict, const std::string& moment) {
            if (moment != "first" && moment != "second") {
              throw DomainError("moment must be first or second");
            }
            return e.mean_cluster_size(restrict,
                                       moment == "first" ? SizeMoment::first : SizeMoment::second);
          },
          py::arg("restrict_min_one_open") = true, py::arg("moment") = "first");
  m.def(
      "enumerate_exact",
      [](std::size_t length, double p, double pe, const std::string& convention) {
        return enumerate_exact(length, ModelParams(p, pe), convention_from(convention));
      },
      py::arg("length_nodes"), py::arg("p"), py::arg("pe"),
      py::arg("convention") = "paper_additive");

  py::class_<TrajectoryPoint>(m, "TrajectoryPoint")
      .def_readonly("step", &TrajectoryPoint::step)
      .def_readonly("p", &TrajectoryPoint::p)
      .def_readonly("filtering_active", &TrajectoryPoint::filtering_active)
      .def_readonly("strength", &TrajectoryPoint::strength);
  m.def(
      "continuous_trajectory",
      [](std::vector<double> p_values, double pe) {
        return continuous_trajectory(Schedule(std::move(p_values)), pe);
      },
      py::arg("p_values"), py::arg("pe"));
  m.def(
      "delayed_trajectory",
      [](std::vector<double> p_values, double pe, std::size_t release_step) {
        return delayed_trajectory(Schedule(std::move(p_values)), pe, release_step);
      },
      py::arg("p_values"), py::arg("pe"), py::arg("release_step"));
  m.def("jump_magnitude", &jump_magnitude, py::arg("p_at_release"), py::arg("pe"));
  m.def(
      "linear_ramp",
      [](std::size_t steps, double p0, double p1) { return Schedule::linear_ramp(steps, p0, p1).values(); },
      py::arg("steps"), py::arg("p_begin") = 0.0, py::arg("p_end") = 1.0);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("exponent_estimate", &FitResult::exponent_estimate)
      .def_readonly("std_error", &FitResult::std_error)
      .def_readonly("window_min", &FitResult::window_min)
      .def_readonly("window_max", &FitResult::window_max)
      .def_readonly("points_used", &FitResult::points_used)
      .def_readonly("r_squared", &FitResult::r_squared);
  m.def(
      "fit_power_law",
      [](const std::vector<double>& xs, const std::vector<double>& ys) { return fit_power_law(xs, ys); },
      py::arg("xs"), py::arg("ys"));
  m.def(
      "subcritical_grid", [](double pe, std::size_t n) { return subcritical_grid(pe, n); },
      py::arg("pe"), py::arg("points") = 10);
  m.def(
      "supercritical_grid", [](double pe, std::size_t n) { return supercritical_grid(pe, n); },
      py::arg("pe"), py::arg("points") = 20);
  m.def(
      "estimate_gamma_analytic",
      [](double pe, const std::vector<double>& grid) { return estimate_gamma_analytic(pe, grid); },
      py::arg("pe"), py::arg("p_grid"));
  m.def(
      "estimate_nu_analytic",
      [](double pe, const std::vector<double>& grid) {
        return estimate_nu(analytic_connectivity_curves(pe, grid), pe);
      },
      py::arg("pe"), py::arg("p_grid"));
  m.def(
      "estimate_sigma_analytic",
      [](double pe, const std::vector<double>& grid) {
        return estimate_sigma(analytic_cluster_histograms(pe, grid), pe);
      },
      py::arg("pe"), py::arg("p_grid"));
  m.def(
      "estimate_beta_analytic",
      [](double pe, const std::vector<double>& grid) { return estimate_beta_analytic(pe, grid); },
      py::arg("pe"), py::arg("p_grid"));
  m.def(
      "estimate_gamma_mc",
      [](double pe, const std::vector<double>& grid, std::size_t length, std::size_t trials,
         std::uint64_t seed, unsigned threads) {
        SweepConfig config;
        config.length_nodes = length;
        config.trials = trials;
        config.master_seed = seed;
        config.threads = threads;
        py::gil_scoped_release release;
        return estimate_gamma_mc(pe, grid, config);
      },
      py::arg("pe"), py::arg("p_grid"), py::arg("length_nodes") = 1'000'000, py::arg("trials") = 50,
      py::arg("master_seed") = 1, py::arg("threads") = 0);
  m.def("tau_from_scaling", &tau_from_scaling, py::arg("gamma"), py::arg("sigma"));
}
