#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qperc/errors.hpp"
#include "qperc/params.hpp"

// Closed-form evaluation of the hybrid open-channel / perfect-pair chain.
//
// Notation used throughout: a = p + p_e is the effective per-edge connection
// probability, b = p_e. The communication-cluster weight of an s-edge cluster
// is w_s = sum_{i=i0}^{s} C(s,i) p^i p_e^(s-i) (1-p)^2 (1-p_e)^2, where the
// lower limit i0 = 1 excludes clusters built from perfect pairs alone.

namespace qperc {

/// Success probability 2 tau (1 - tau) of filtering sqrt(tau)|00> +
/// sqrt(1 - tau)|11> into a maximally entangled pair. At most 1/2.
double filtering_probability(double tau);

/// Occupation threshold 1 - p_e.
double critical_occupation(double pe);

/// Probability p^n that n consecutive channels are all open.
double classical_spanning_probability(double p, std::uint64_t n);

/// Cluster weight w_s, evaluated through the binomial theorem:
/// [(p + p_e)^s - p_e^s] (1-p)^2 (1-p_e)^2, or with the p_e^s term dropped
/// when `include_zero_open` is set.
double cluster_weight(std::uint64_t s, const ModelParams& params, bool include_zero_open = false);

/// Per-edge cluster number n_s = w_s / s.
double cluster_number(std::uint64_t s, const ModelParams& params, bool include_zero_open = false);

/// Mean cluster size S = sum s w_s / sum w_s below threshold.
///
/// With the default lower limit this is (1 - ab) / ((1 - a)(1 - b)); with
/// `include_zero_open` it is 1 / (1 - a). Throws DivergenceError when
/// p + p_e >= 1.
double mean_cluster_size(const ModelParams& params, bool include_zero_open = false);

struct SeriesValue {
  double value = 0.0;
  /// a^s_max / (1 - a)^2, a bound on the neglected tail.
  double truncation_bound = 0.0;
  std::uint64_t terms = 0;
};

/// The defining ratio of S summed term by term up to s_max.
SeriesValue mean_cluster_size_series(const ModelParams& params, std::uint64_t s_max,
                                     bool include_zero_open = false);

/// g(r) = (p + p_e)^r. Throws DomainError if p + p_e > 1.
double pair_connectivity(std::uint64_t r, const ModelParams& params);

/// xi = -1 / ln(p + p_e); requires 0 < p + p_e < 1.
double correlation_length(const ModelParams& params);

/// Cutoff of the geometric cluster-weight tail. Same expression as the
/// correlation length; kept separate because it feeds the sigma estimator.
double characteristic_cluster_size(const ModelParams& params);

enum class RootKind { trivial_unit, physical };

const char* to_string(RootKind kind) noexcept;

/// Solution of Q = (1-p) + p Q Q_e, Q_e = (1-p_e) + p_e Q Q_e and
/// P = 1 - (Q Q_e)^2.
struct StrengthSolution {
  double q_open = 1.0;
  double q_pair = 1.0;
  double product_x = 1.0;
  double strength_p = 0.0;
  RootKind root_used = RootKind::trivial_unit;
  std::size_t iterations = 0;
};

/// Closed-form strength. X = min(1, (1-p)(1-p_e) / (p p_e)); P = 1 - X^2.
///
/// P is exactly 0 for p + p_e <= 1. When p = 1 or p_e = 1 the chain is fully
/// connected and P = 1; otherwise p p_e = 0 gives P = 0 on the unit root.
StrengthSolution percolation_strength_closed(const ModelParams& params);

enum class FixedPointScheme {
  /// Newton steps on the two-equation system. Converges monotonically to the
  /// least fixed point, linearly with rate 1/2 at the threshold double root.
  newton,
  /// Plain substitution Q <- F(Q, Q_e). Sublinear at the threshold.
  picard,
};

/// Thrown when the strength iteration does not settle; carries the last
/// iterate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, StrengthSolution last)
      : std::runtime_error(what), last_(last) {}
  const StrengthSolution& last_iterate() const noexcept { return last_; }

 private:
  StrengthSolution last_;
};

/// Iterates the self-consistent system from Q = 1 - p, Q_e = 1 - p_e until the
/// change in Q Q_e drops below `tolerance`.
StrengthSolution percolation_strength_fixed_point(const ModelParams& params,
                                                  double tolerance = 1e-12,
                                                  std::size_t max_iterations = 1'000'000,
                                                  FixedPointScheme scheme = FixedPointScheme::newton);

/// p p_e X^2 + (p + p_e - 2 p p_e - 1) X + (1-p)(1-p_e), the quadratic whose
/// roots are the candidate products X = Q Q_e.
double strength_quadratic(const ModelParams& params, double x);

struct ExponentSet {
  double gamma = 0.0;
  double sigma = 0.0;
  double nu = 0.0;
  double tau_fisher = 0.0;
  double beta = 0.0;
};

/// gamma = sigma = nu = beta = 1, tau = 2.
ExponentSet declared_exponents() noexcept;

struct ScalingRelation {
  std::string name;
  double left = 0.0;
  double right = 0.0;
  bool holds = false;
  double tolerance = 0.0;
};

struct ScalingLawAudit {
  std::vector<ScalingRelation> relations;
};

/// Checks beta = (tau-2)/sigma, gamma = (3-tau)/sigma and d nu = (tau-1)/sigma.
/// Throws DomainError if sigma == 0.
ScalingLawAudit scaling_law_audit(const ExponentSet& exponents, int dimension = 1,
                                  double tolerance = 1e-9);

}  // namespace qperc
