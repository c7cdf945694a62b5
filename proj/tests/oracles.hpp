#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace qperc::oracle {

// 1 - (0.4 * 0.51 / (0.6 * 0.49))^2 evaluated in exact rational arithmetic.
inline constexpr double kJumpStrength = 0.51853394418992083;
// Same expression at p = 0.7.
inline constexpr double kDelayedStrengthAt07 = 0.80102678305807951;

inline long double binomial(std::uint64_t n, std::uint64_t k) {
  long double c = 1.0L;
  for (std::uint64_t j = 1; j <= k; ++j) c = c * static_cast<long double>(n - k + j) / j;
  return c;
}

// sum_{i=i0}^{s} C(s,i) p^i p_e^(s-i) (1-p)^2 (1-p_e)^2, term by term.
inline double binomial_cluster_weight(std::uint64_t s, double p, double pe, std::uint64_t i0) {
  long double sum = 0.0L;
  for (std::uint64_t i = i0; i <= s; ++i) {
    sum += binomial(s, i) * std::pow(static_cast<long double>(p), static_cast<long double>(i)) *
           std::pow(static_cast<long double>(pe), static_cast<long double>(s - i));
  }
  const long double boundary = (1.0L - p) * (1.0L - p) * (1.0L - pe) * (1.0L - pe);
  return static_cast<double>(sum * boundary);
}

// [a/(1-a)^2 - b/(1-b)^2] / [a/(1-a) - b/(1-b)] with a = p + p_e, b = p_e.
inline double displayed_mean_cluster_size(double p, double pe) {
  const long double a = static_cast<long double>(p) + pe;
  const long double b = pe;
  const long double num = a / ((1 - a) * (1 - a)) - b / ((1 - b) * (1 - b));
  const long double den = a / (1 - a) - b / (1 - b);
  return static_cast<double>(num / den);
}

// sum s w_s / sum w_s up to s_max using the explicit binomial weights.
inline double series_mean_cluster_size(double p, double pe, std::uint64_t s_max) {
  long double first = 0.0L, zeroth = 0.0L;
  for (std::uint64_t s = 1; s <= s_max; ++s) {
    // Closed form of the inner binomial sum would reuse the code under test;
    // log-space terms keep C(s,i) finite up to large s.
    long double w = 0.0L;
    for (std::uint64_t i = 1; i <= s; ++i) {
      const long double log_term = std::lgamma(static_cast<long double>(s) + 1) -
                                   std::lgamma(static_cast<long double>(i) + 1) -
                                   std::lgamma(static_cast<long double>(s - i) + 1) +
                                   i * std::log(static_cast<long double>(p)) +
                                   (s - i) * std::log(static_cast<long double>(pe));
      w += std::exp(log_term);
    }
    first += s * w;
    zeroth += w;
  }
  return static_cast<double>(first / zeroth);
}

inline double ols_slope(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

// Large-chain limits for i.i.d. edges with connection probability q, where a
// cluster of s edges occurs with density (1-q)^2 q^s and is all-pair with
// probability (pe/q)^s.
inline double classical_second_moment(double q) { return (1.0 + q) / (1.0 - q); }
inline double restricted_first_moment(double q, double pair_only) {
  // sum s (q^s - b^s) / sum (q^s - b^s), b = pair-only connection probability
  const double a = q, b = pair_only;
  return (a / ((1 - a) * (1 - a)) - b / ((1 - b) * (1 - b))) / (a / (1 - a) - b / (1 - b));
}

// log P(X = k) for X ~ Poisson(lambda).
inline double poisson_log_pmf(std::uint64_t k, double lambda) {
  if (lambda == 0.0) return k == 0 ? 0.0 : -INFINITY;
  return static_cast<double>(k) * std::log(lambda) - lambda - std::lgamma(static_cast<double>(k) + 1.0);
}

// min(P(X <= k), P(X >= k)) for X ~ Poisson(lambda).
inline double poisson_tail(std::uint64_t k, double lambda) {
  double lower = 0.0;
  for (std::uint64_t j = 0; j <= k; ++j) lower += std::exp(poisson_log_pmf(j, lambda));
  const double upper = 1.0 - lower + std::exp(poisson_log_pmf(k, lambda));
  return std::min(std::min(lower, upper), 1.0);
}

}  // namespace qperc::oracle
