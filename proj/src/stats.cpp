#include "qperc/stats.hpp"

#include <cmath>
#include <limits>

#include "qperc/errors.hpp"

namespace qperc {

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys,
                     std::span<const double> weights) {
  if (xs.size() != ys.size() || (!weights.empty() && weights.size() != xs.size())) {
    throw DomainError("linear_fit: input lengths differ");
  }
  const std::size_t n = xs.size();
  if (n < 2) {
    throw DomainError("linear_fit: need at least two points");
  }
  auto w = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };

  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w(i);
    sx += w(i) * xs[i];
    sy += w(i) * ys[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += w(i) * dx * dx;
    sxy += w(i) * dx * dy;
    syy += w(i) * dy * dy;
  }
  if (!(sxx > 0.0)) {
    throw DomainError("linear_fit: abscissae are all equal");
  }

  LinearFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += w(i) * r * r;
  }
  fit.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - ss_res / syy) : 1.0;
  // Relative weights: the residual variance absorbs their overall scale.
  fit.slope_stderr = n > 2 ? std::sqrt(ss_res / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

Estimate jackknife(const std::vector<std::vector<double>>& per_trial,
                   const std::function<double(std::span<const double>)>& statistic) {
  if (per_trial.empty() || per_trial.front().empty()) {
    throw EstimationError("jackknife: no trials");
  }
  const std::size_t k = per_trial.size();
  const std::size_t n = per_trial.front().size();
  std::vector<double> totals(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    for (double v : per_trial[j]) totals[j] += v;
  }
  Estimate out;
  out.value = statistic(totals);
  if (n < 2) {
    out.std_error = 0.0;
    return out;
  }

  std::vector<double> leave_one_out(k);
  std::vector<double> replicates(n);
  double mean = 0.0;
  std::size_t finite = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) leave_one_out[j] = totals[j] - per_trial[j][i];
    replicates[i] = statistic(leave_one_out);
    if (std::isfinite(replicates[i])) {
      mean += replicates[i];
      ++finite;
    }
  }
  if (finite < 2) {
    out.std_error = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  mean /= static_cast<double>(finite);
  double ss = 0.0;
  for (double r : replicates) {
    if (std::isfinite(r)) ss += (r - mean) * (r - mean);
  }
  const double m = static_cast<double>(finite);
  out.std_error = std::sqrt((m - 1.0) / m * ss);
  return out;
}

}  // namespace qperc
