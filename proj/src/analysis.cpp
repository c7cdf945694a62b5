#include "qperc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "qperc/analytic.hpp"
#include "qperc/dynamics.hpp"
#include "qperc/errors.hpp"
#include "qperc/stats.hpp"

namespace qperc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

std::vector<double> log_spaced(Window window, std::size_t points) {
  if (points < 2 || !(window.min > 0.0) || !(window.max > window.min)) {
    throw DomainError("grid needs at least two points on a positive, nondegenerate window");
  }
  std::vector<double> out(points);
  const double lo = std::log(window.min);
  const double hi = std::log(window.max);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  out.front() = window.min;
  out.back() = window.max;
  return out;
}

// Fits y against the distance to threshold and returns the result with the
// exponent sign applied.
FitResult fit_against_distance(std::span<const double> distances, std::span<const double> ys,
                               double sign) {
  FitResult fit = fit_power_law(distances, ys);
  fit.exponent_estimate *= sign;
  return fit;
}

}  // namespace

FitResult fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw DomainError("fit_power_law: xs and ys differ in length");
  }
  if (xs.size() < 2) {
    throw DomainError("fit_power_law: need at least two points");
  }
  std::vector<double> lx(xs.size());
  std::vector<double> ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0) || !std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw DomainError("fit_power_law: inputs must be finite and strictly positive");
    }
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  const LinearFit line = linear_fit(lx, ly);
  FitResult out;
  out.exponent_estimate = line.slope;
  out.std_error = line.slope_stderr;
  out.window_min = *std::min_element(xs.begin(), xs.end());
  out.window_max = *std::max_element(xs.begin(), xs.end());
  out.points_used = line.points;
  out.r_squared = line.r_squared;
  return out;
}

std::vector<double> subcritical_grid(double pe, std::size_t points, Window window) {
  const double pc = critical_occupation(pe);
  std::vector<double> grid;
  for (double d : log_spaced(window, points)) grid.push_back(pc - d);
  return grid;
}

std::vector<double> supercritical_grid(double pe, std::size_t points, Window window) {
  const double pc = critical_occupation(pe);
  std::vector<double> grid;
  for (double d : log_spaced(window, points)) grid.push_back(pc + d);
  return grid;
}

FitResult estimate_gamma(std::span<const CurvePoint> mean_sizes, double pe) {
  const double pc = critical_occupation(pe);
  std::vector<double> xs, ys;
  for (const auto& pt : mean_sizes) {
    if (!(pt.p < pc)) {
      throw DomainError("gamma fit needs every p below p_c = " + format_number(pc));
    }
    xs.push_back(pc - pt.p);
    ys.push_back(pt.value);
  }
  return fit_against_distance(xs, ys, -1.0);
}

FitResult estimate_gamma_analytic(double pe, std::span<const double> p_grid) {
  std::vector<CurvePoint> points;
  for (double p : p_grid) {
    if (!(p < critical_occupation(pe))) {
      throw DomainError("gamma fit needs every p below p_c");
    }
    points.push_back({p, mean_cluster_size(ModelParams(p, pe))});
  }
  return estimate_gamma(points, pe);
}

FitResult estimate_gamma_mc(double pe, std::span<const double> p_grid, SweepConfig config) {
  config.convention = Convention::paper_additive;
  std::vector<GridPoint> grid;
  for (double p : p_grid) {
    if (!(p < critical_occupation(pe))) {
      throw DomainError("gamma fit needs every p below p_c");
    }
    grid.push_back({p, pe});
  }
  const SweepResult sweep = run_sweep(grid, config);
  std::vector<CurvePoint> points;
  for (const auto& row : sweep.rows) {
    if (row.error) throw DomainError(*row.error);
    if (!std::isfinite(row.mean_cluster_size.value)) {
      throw EstimationError("no qualifying clusters at p = " + format_number(row.point.p));
    }
    points.push_back({row.point.p, row.mean_cluster_size.value});
  }
  return estimate_gamma(points, pe);
}

double fit_correlation_length(const ConnectivityCurve& curve) {
  std::vector<double> rs, logs;
  for (std::size_t r = 0; r < curve.g.size() && curve.g[r] > 0.0; ++r) {
    rs.push_back(static_cast<double>(r));
    logs.push_back(std::log(curve.g[r]));
  }
  if (rs.size() < 2) {
    throw EstimationError("connectivity curve at p = " + format_number(curve.p) +
                          " has fewer than two positive entries");
  }
  const LinearFit line = linear_fit(rs, logs);
  if (!(line.slope < 0.0)) {
    throw EstimationError("connectivity does not decay at p = " + format_number(curve.p));
  }
  return -1.0 / line.slope;
}

FitResult estimate_nu(std::span<const ConnectivityCurve> curves, double pe) {
  if (curves.size() < 2) {
    throw DomainError("nu fit needs connectivity curves at two or more p values");
  }
  const double pc = critical_occupation(pe);
  std::vector<double> xs, ys;
  for (const auto& c : curves) {
    if (!(c.p < pc)) {
      throw DomainError("nu fit needs every p below p_c = " + format_number(pc));
    }
    xs.push_back(pc - c.p);
    ys.push_back(fit_correlation_length(c));
  }
  return fit_against_distance(xs, ys, -1.0);
}

std::vector<ConnectivityCurve> analytic_connectivity_curves(double pe, std::span<const double> p_grid,
                                                            std::size_t r_max) {
  std::vector<ConnectivityCurve> out;
  for (double p : p_grid) {
    const ModelParams params(p, pe);
    ConnectivityCurve c{p, {}};
    for (std::size_t r = 0; r <= r_max; ++r) c.g.push_back(pair_connectivity(r, params));
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<ConnectivityCurve> connectivity_curves(const SweepResult& sweep) {
  std::vector<ConnectivityCurve> out;
  for (const auto& row : sweep.rows) {
    if (row.error) continue;
    ConnectivityCurve c{row.point.p, {}};
    for (const auto& e : row.pair_connectivity) c.g.push_back(e.value);
    out.push_back(std::move(c));
  }
  return out;
}

double fit_cutoff_size(const ClusterHistogram& histogram, TailOptions options) {
  std::vector<double> sizes, logs, weights;
  for (std::size_t s = std::max<std::size_t>(options.s_min, 1); s < histogram.weights.size(); ++s) {
    const double w = histogram.weights[s];
    if (!(w > 0.0) || w < options.min_weight) break;
    sizes.push_back(static_cast<double>(s));
    logs.push_back(std::log(w));
    weights.push_back(w);
  }
  if (sizes.size() < 3) {
    throw EstimationError("cluster tail at p = " + format_number(histogram.p) +
                          " has fewer than three usable sizes");
  }
  const double span = *std::max_element(weights.begin(), weights.end()) /
                      *std::min_element(weights.begin(), weights.end());
  if (span < 10.0) {
    throw EstimationError("cluster tail at p = " + format_number(histogram.p) +
                          " spans less than one decade");
  }
  const LinearFit line = options.count_weights ? linear_fit(sizes, logs, weights)
                                               : linear_fit(sizes, logs);
  if (!(line.slope < 0.0)) {
    throw EstimationError("cluster tail does not decay at p = " + format_number(histogram.p));
  }
  return -1.0 / line.slope;
}

FitResult estimate_sigma(std::span<const ClusterHistogram> histograms, double pe,
                         TailOptions options) {
  if (histograms.size() < 2) {
    throw DomainError("sigma fit needs cluster histograms at two or more p values");
  }
  const double pc = critical_occupation(pe);
  std::vector<double> xs, ys;
  for (const auto& h : histograms) {
    if (!(h.p < pc)) {
      throw DomainError("sigma fit needs every p below p_c = " + format_number(pc));
    }
    xs.push_back(pc - h.p);
    ys.push_back(fit_cutoff_size(h, options));
  }
  // s_xi ~ (p_c - p)^(-1/sigma)
  FitResult fit = fit_power_law(xs, ys);
  const double slope = fit.exponent_estimate;
  if (!(slope < 0.0)) {
    throw EstimationError("cutoff size does not grow toward p_c");
  }
  fit.exponent_estimate = -1.0 / slope;
  fit.std_error = fit.std_error / (slope * slope);
  return fit;
}

std::vector<ClusterHistogram> analytic_cluster_histograms(double pe, std::span<const double> p_grid) {
  std::vector<ClusterHistogram> out;
  for (double p : p_grid) {
    const ModelParams params(p, pe);
    const double cutoff = characteristic_cluster_size(params);
    const auto s_max = static_cast<std::size_t>(20.0 + 8.0 * cutoff);
    ClusterHistogram h{p, std::vector<double>(s_max + 1, 0.0)};
    for (std::size_t s = 1; s <= s_max; ++s) h.weights[s] = cluster_weight(s, params);
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<ClusterHistogram> cluster_histograms(const SweepResult& sweep) {
  std::vector<ClusterHistogram> out;
  for (const auto& row : sweep.rows) {
    if (row.error) continue;
    out.push_back({row.point.p, row.histogram_restricted});
  }
  return out;
}

FitResult estimate_beta(std::span<const CurvePoint> strengths, double pe) {
  const double pc = critical_occupation(pe);
  std::vector<double> xs, ys;
  for (const auto& pt : strengths) {
    if (!(pt.p > pc) || pt.p > pc + kMaxSupercriticalDistance + 1e-12) {
      throw DomainError("beta fit needs p_c < p <= p_c + 0.05 (p_c = " + format_number(pc) + ")");
    }
    xs.push_back(pt.p - pc);
    ys.push_back(pt.value);
  }
  return fit_against_distance(xs, ys, 1.0);
}

FitResult estimate_beta_analytic(double pe, std::span<const double> p_grid) {
  std::vector<CurvePoint> points;
  for (double p : p_grid) {
    points.push_back({p, percolation_strength_closed(ModelParams(p, pe)).strength_p});
  }
  return estimate_beta(points, pe);
}

double tau_from_scaling(double gamma, double sigma) noexcept { return 3.0 - gamma * sigma; }

bool agrees_within(double analytic, double mc, double stderr_value, double bands) noexcept {
  if (!std::isfinite(analytic) || !std::isfinite(mc) || !std::isfinite(stderr_value)) return false;
  return std::abs(analytic - mc) <= bands * stderr_value;
}

std::vector<DiscrepancyEntry> discrepancy_ledger() {
  const double jump = jump_magnitude(0.6, 0.49);
  return {
      {"delayed-filtering jump at p = 0.6, p_e = 0.49", "P ~ 0.55", format_number(jump),
       "the closed form 1 - ((1-p)(1-p_e)/(p p_e))^2 is reported"},
      {"abscissa of pre-transition scaling", "(p_e - p)^-1", "(p_c - p)^-1 = (1 - p_e - p)^-1",
       "only p_c - p vanishes at the threshold p_c = 1 - p_e"},
      {"lower limit of the cluster-weight sum", "i = 1 (clusters need an open channel)",
       "i = 0 gives S = 1/(1 - a); i = 1 gives S = (1 - ab)/((1 - a)(1 - b))",
       "i = 1 by default; include_zero_open selects i = 0"},
  };
}

ComparisonReport compare_analytic_mc(const SweepRow& row, const SweepConfig& config) {
  if (row.error) {
    throw DomainError("cannot compare a rejected sweep cell: " + *row.error);
  }
  const ModelParams params(row.point.p, row.point.pe);
  ComparisonReport report;
  report.point = row.point;
  report.convention = config.convention;

  auto add = [&](std::string name, double analytic, const Estimate& mc, std::string note) {
    report.rows.push_back({std::move(name), analytic, mc.value, mc.std_error,
                           agrees_within(analytic, mc.value, mc.std_error), std::move(note)});
  };

  double s_analytic = kNaN;
  std::string s_note = "restricted first moment vs closed form";
  try {
    s_analytic = mean_cluster_size(params);
  } catch (const DivergenceError&) {
    s_note = "closed form diverges at p + p_e >= 1";
  }
  add("mean_cluster_size", s_analytic, row.mean_cluster_size, s_note);

  const double q = params.connectivity();
  for (std::size_t r : {1u, 2u, 5u, 10u}) {
    if (r >= row.pair_connectivity.size()) continue;
    const double g = q <= 1.0 ? std::pow(q, static_cast<double>(r)) : kNaN;
    add("g(" + std::to_string(r) + ")", g, row.pair_connectivity[r], "(p + p_e)^r");
  }

  const double span = q <= 1.0 ? std::pow(q, static_cast<double>(config.length_nodes - 1)) : kNaN;
  add("spanning_probability", span, Estimate{row.spanning.fraction, row.spanning.std_error},
      "(p + p_e)^(L-1)");

  report.ledger = discrepancy_ledger();
  return report;
}

}  // namespace qperc
