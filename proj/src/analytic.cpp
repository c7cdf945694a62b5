#include "qperc/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qperc {

namespace {

double boundary_factor(const ModelParams& params) {
  const double closed = 1.0 - params.p();
  const double unfiltered = 1.0 - params.pe();
  return closed * closed * unfiltered * unfiltered;
}

void require_below_threshold(const ModelParams& params) {
  if (params.connectivity() >= 1.0) {
    throw DivergenceError("mean cluster size diverges for p + p_e >= 1 (p = " +
                          std::to_string(params.p()) + ", p_e = " + std::to_string(params.pe()) +
                          ")");
  }
}

StrengthSolution solution_from_product(const ModelParams& params, double x) {
  StrengthSolution out;
  out.product_x = x;
  // Q - p X = 1 - p and Q_e - p_e X = 1 - p_e follow from X = Q Q_e.
  out.q_open = 1.0 - params.p() + params.p() * x;
  out.q_pair = 1.0 - params.pe() + params.pe() * x;
  out.strength_p = std::max(0.0, 1.0 - x * x);
  out.root_used = x < 1.0 ? RootKind::physical : RootKind::trivial_unit;
  return out;
}

}  // namespace

double filtering_probability(double tau) {
  require_probability(tau, "tau");
  return 2.0 * tau * (1.0 - tau);
}

double critical_occupation(double pe) {
  require_probability(pe, "p_e");
  return 1.0 - pe;
}

double classical_spanning_probability(double p, std::uint64_t n) {
  require_probability(p, "p");
  return std::pow(p, static_cast<double>(n));
}

double cluster_weight(std::uint64_t s, const ModelParams& params, bool include_zero_open) {
  if (s == 0) {
    throw DomainError("cluster size must be at least one edge");
  }
  const double exponent = static_cast<double>(s);
  double sum = std::pow(params.connectivity(), exponent);
  if (!include_zero_open) {
    sum -= std::pow(params.pe(), exponent);
  }
  return sum * boundary_factor(params);
}

double cluster_number(std::uint64_t s, const ModelParams& params, bool include_zero_open) {
  return cluster_weight(s, params, include_zero_open) / static_cast<double>(s);
}

double mean_cluster_size(const ModelParams& params, bool include_zero_open) {
  require_below_threshold(params);
  const double a = params.connectivity();
  if (include_zero_open) {
    return 1.0 / (1.0 - a);
  }
  const double b = params.pe();
  // [a/(1-a)^2 - b/(1-b)^2] / [a/(1-a) - b/(1-b)] with the common factor
  // (a - b) cancelled, so p -> 0 stays finite.
  return (1.0 - a * b) / ((1.0 - a) * (1.0 - b));
}

SeriesValue mean_cluster_size_series(const ModelParams& params, std::uint64_t s_max,
                                     bool include_zero_open) {
  require_below_threshold(params);
  if (s_max == 0) {
    throw DomainError("series needs at least one term");
  }
  double first = 0.0;
  double zeroth = 0.0;
  for (std::uint64_t s = 1; s <= s_max; ++s) {
    const double w = cluster_weight(s, params, include_zero_open);
    first += static_cast<double>(s) * w;
    zeroth += w;
  }
  const double a = params.connectivity();
  SeriesValue out;
  out.value = zeroth > 0.0 ? first / zeroth : 1.0;
  out.truncation_bound = std::pow(a, static_cast<double>(s_max)) / ((1.0 - a) * (1.0 - a));
  out.terms = s_max;
  return out;
}

double pair_connectivity(std::uint64_t r, const ModelParams& params) {
  const double q = params.connectivity();
  if (q > 1.0) {
    throw DomainError("pair connectivity needs p + p_e <= 1 under the additive reading");
  }
  return std::pow(q, static_cast<double>(r));
}

double correlation_length(const ModelParams& params) {
  const double q = params.connectivity();
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("correlation length needs 0 < p + p_e < 1, got " + std::to_string(q));
  }
  return -1.0 / std::log(q);
}

double characteristic_cluster_size(const ModelParams& params) {
  return correlation_length(params);
}

const char* to_string(RootKind kind) noexcept {
  switch (kind) {
    case RootKind::trivial_unit:
      return "trivial_unit";
    case RootKind::physical:
      return "physical";
  }
  return "unknown";
}

StrengthSolution percolation_strength_closed(const ModelParams& params) {
  const double p = params.p();
  const double pe = params.pe();
  if (p == 1.0 || pe == 1.0) {
    return solution_from_product(params, 0.0);
  }
  if (p * pe == 0.0) {
    return solution_from_product(params, 1.0);
  }
  const double x = (1.0 - p) * (1.0 - pe) / (p * pe);
  return solution_from_product(params, std::min(1.0, x));
}

double strength_quadratic(const ModelParams& params, double x) {
  const double p = params.p();
  const double pe = params.pe();
  return p * pe * x * x + (p + pe - 2.0 * p * pe - 1.0) * x + (1.0 - p) * (1.0 - pe);
}

StrengthSolution percolation_strength_fixed_point(const ModelParams& params, double tolerance,
                                                  std::size_t max_iterations,
                                                  FixedPointScheme scheme) {
  if (!(tolerance > 0.0)) {
    throw DomainError("fixed-point tolerance must be positive");
  }
  const double p = params.p();
  const double pe = params.pe();
  // Work with u = 1 - Q and v = 1 - Q_e. The system becomes u = p w,
  // v = p_e w with w = 1 - Q Q_e = u + v - u v; its residual carries no O(1)
  // cancellation, so the threshold double root resolves to full precision.
  double u = p;
  double v = pe;
  double w = u + v - u * v;

  auto snapshot = [&](std::size_t iterations) {
    StrengthSolution s;
    s.q_open = 1.0 - u;
    s.q_pair = 1.0 - v;
    s.product_x = 1.0 - w;
    s.strength_p = std::max(0.0, w * (2.0 - w));
    s.root_used = w > 10.0 * tolerance ? RootKind::physical : RootKind::trivial_unit;
    s.iterations = iterations;
    return s;
  };

  for (std::size_t it = 1; it <= max_iterations; ++it) {
    double next_u = p * w;
    double next_v = pe * w;
    if (scheme == FixedPointScheme::newton) {
      const double g0 = u - p * w;
      const double g1 = v - pe * w;
      const double j00 = 1.0 - p * (1.0 - v);
      const double j01 = -p * (1.0 - u);
      const double j10 = -pe * (1.0 - v);
      const double j11 = 1.0 - pe * (1.0 - u);
      const double det = j00 * j11 - j01 * j10;
      if (det > 0.0 && std::isfinite(det)) {
        next_u = u - (j11 * g0 - j01 * g1) / det;
        next_v = v - (j00 * g1 - j10 * g0) / det;
      }
    }
    // Iterates approach the fixed point from above and stay in [0, 1].
    u = std::clamp(next_u, 0.0, 1.0);
    v = std::clamp(next_v, 0.0, 1.0);
    const double next_w = u + v - u * v;
    const double change = std::abs(next_w - w);
    w = next_w;
    if (change < tolerance) {
      return snapshot(it);
    }
  }
  throw ConvergenceError("strength iteration did not converge within " +
                             std::to_string(max_iterations) + " iterations",
                         snapshot(max_iterations));
}

ExponentSet declared_exponents() noexcept {
  return ExponentSet{.gamma = 1.0, .sigma = 1.0, .nu = 1.0, .tau_fisher = 2.0, .beta = 1.0};
}

ScalingLawAudit scaling_law_audit(const ExponentSet& e, int dimension, double tolerance) {
  if (e.sigma == 0.0) {
    throw DomainError("scaling relations need sigma != 0");
  }
  auto relation = [tolerance](std::string name, double left, double right) {
    return ScalingRelation{std::move(name), left, right, std::abs(left - right) <= tolerance,
                           tolerance};
  };
  ScalingLawAudit audit;
  audit.relations.push_back(relation("beta=(tau-2)/sigma", e.beta, (e.tau_fisher - 2.0) / e.sigma));
  audit.relations.push_back(
      relation("gamma=(3-tau)/sigma", e.gamma, (3.0 - e.tau_fisher) / e.sigma));
  audit.relations.push_back(relation("d*nu=(tau-1)/sigma", static_cast<double>(dimension) * e.nu,
                                     (e.tau_fisher - 1.0) / e.sigma));
  return audit;
}

}  // namespace qperc
