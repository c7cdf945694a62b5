#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qperc {

/// A point estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 1.0;
  std::size_t points = 0;
};

/// Least squares line through (xs, ys). `weights` may be empty (all ones).
/// Requires at least two distinct abscissae.
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys,
                     std::span<const double> weights = {});

/// Delete-one jackknife over trials for a statistic that is a function of
/// per-trial sums. `per_trial[k]` is the vector of k-th summands, one entry
/// per trial; `statistic` receives the vector of totals.
Estimate jackknife(const std::vector<std::vector<double>>& per_trial,
                   const std::function<double(std::span<const double>)>& statistic);

}  // namespace qperc
