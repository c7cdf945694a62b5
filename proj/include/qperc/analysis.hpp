#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qperc/montecarlo.hpp"
#include "qperc/params.hpp"

// Critical-exponent estimation by log-log least squares, and the side-by-side
// comparison of closed-form and sampled observables.
//
// Every pre-transition scaling is fitted against the distance p_c - p with
// p_c = 1 - p_e; the supercritical strength is fitted against p - p_c.

namespace qperc {

struct FitResult {
  double exponent_estimate = 0.0;
  double std_error = 0.0;
  double window_min = 0.0;
  double window_max = 0.0;
  std::size_t points_used = 0;
  double r_squared = 0.0;
};

/// Slope of ln y against ln x. Throws DomainError on nonpositive input or
/// fewer than two points.
FitResult fit_power_law(std::span<const double> xs, std::span<const double> ys);

/// A value observed at occupation probability p.
struct CurvePoint {
  double p = 0.0;
  double value = 0.0;
};

struct Window {
  double min = 0.0;
  double max = 0.0;
};

inline constexpr Window kSubcriticalWindow{0.02, 0.2};
inline constexpr Window kSupercriticalWindow{1e-4, 0.03};
inline constexpr double kMaxSupercriticalDistance = 0.05;

/// p values at log-spaced distances p_c - d, d in `window`, nearest first.
std::vector<double> subcritical_grid(double pe, std::size_t points = 10,
                                     Window window = kSubcriticalWindow);
/// p values at log-spaced distances p_c + d, d in `window`, nearest first.
std::vector<double> supercritical_grid(double pe, std::size_t points = 20,
                                       Window window = kSupercriticalWindow);

/// gamma from S(p) ~ (p_c - p)^-gamma. Throws DomainError if any p >= p_c.
FitResult estimate_gamma(std::span<const CurvePoint> mean_sizes, double pe);
FitResult estimate_gamma_analytic(double pe, std::span<const double> p_grid);
/// Runs a paper_additive sweep over `p_grid` and fits its restricted
/// first-moment mean cluster size.
FitResult estimate_gamma_mc(double pe, std::span<const double> p_grid, SweepConfig config);

/// g(r) for r = 0, 1, ... at one occupation probability.
struct ConnectivityCurve {
  double p = 0.0;
  std::vector<double> g;
};

/// Correlation length from the decay of ln g(r), r >= 1.
double fit_correlation_length(const ConnectivityCurve& curve);

/// nu from xi(p) ~ (p_c - p)^-nu; each xi comes from fit_correlation_length.
FitResult estimate_nu(std::span<const ConnectivityCurve> curves, double pe);
std::vector<ConnectivityCurve> analytic_connectivity_curves(double pe, std::span<const double> p_grid,
                                                            std::size_t r_max = 20);
std::vector<ConnectivityCurve> connectivity_curves(const SweepResult& sweep);

/// Cluster weights (analytic) or counts (sampled) indexed by size in edges.
struct ClusterHistogram {
  double p = 0.0;
  std::vector<double> weights;
};

struct TailOptions {
  /// First size used; skips the region where the p_e^s term still matters.
  std::size_t s_min = 10;
  /// Sizes with a smaller weight end the tail (use ~25 for sampled counts).
  double min_weight = 0.0;
  /// Weight each log-count by the count itself (Poisson errors).
  bool count_weights = false;
};

/// Cutoff s_xi from the exponential tail w_s ~ exp(-s / s_xi). Throws
/// EstimationError when fewer than three tail points span less than a decade.
double fit_cutoff_size(const ClusterHistogram& histogram, TailOptions options = {});

/// sigma from s_xi(p) ~ (p_c - p)^(-1/sigma).
FitResult estimate_sigma(std::span<const ClusterHistogram> histograms, double pe,
                         TailOptions options = {});
std::vector<ClusterHistogram> analytic_cluster_histograms(double pe, std::span<const double> p_grid);
std::vector<ClusterHistogram> cluster_histograms(const SweepResult& sweep);

/// beta from P(p) ~ (p - p_c)^beta. Every p must satisfy
/// p_c < p <= p_c + 0.05, otherwise DomainError.
FitResult estimate_beta(std::span<const CurvePoint> strengths, double pe);
FitResult estimate_beta_analytic(double pe, std::span<const double> p_grid);

/// Fisher exponent recovered from gamma = (3 - tau) / sigma.
double tau_from_scaling(double gamma, double sigma) noexcept;

struct ComparisonRow {
  std::string observable;
  double analytic = 0.0;
  double mc_estimate = 0.0;
  double mc_stderr = 0.0;
  bool agrees = false;
  std::string note;
};

/// A printed or alternative value set against the one this library computes.
struct DiscrepancyEntry {
  std::string topic;
  std::string printed;
  std::string computed;
  std::string resolution;
};

struct ComparisonReport {
  GridPoint point;
  Convention convention = Convention::paper_additive;
  std::vector<ComparisonRow> rows;
  std::vector<DiscrepancyEntry> ledger;
};

/// |analytic - mc| <= 4 stderr.
bool agrees_within(double analytic, double mc, double stderr_value, double bands = 4.0) noexcept;

/// Rows for S (restricted first moment), g(r) at r in {1, 2, 5, 10} (those
/// recorded in the sweep), and spanning probability against (p + p_e)^(L-1),
/// followed by the fixed discrepancy ledger.
ComparisonReport compare_analytic_mc(const SweepRow& row, const SweepConfig& config);

/// The fixed discrepancy ledger attached to every report.
std::vector<DiscrepancyEntry> discrepancy_ledger();

}  // namespace qperc
