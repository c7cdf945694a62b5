#include <algorithm>
#include <cmath>
#include <limits>

#include "qperc/errors.hpp"
#include "qperc/montecarlo.hpp"

namespace qperc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double safe_ratio(double num, double den) noexcept { return den > 0.0 ? num / den : kNaN; }

std::size_t stored_r_max(std::span<const TrialStats> trials) {
  std::size_t r_max = std::numeric_limits<std::size_t>::max();
  for (const auto& t : trials) {
    if (t.connected_pairs.empty()) return 0;
    r_max = std::min(r_max, t.connected_pairs.size() - 1);
  }
  return r_max;
}

void require_trials(std::span<const TrialStats> trials) {
  if (trials.empty()) {
    throw EstimationError("no trials to estimate from");
  }
}

double pairs_at(const TrialStats& t, std::size_t r) {
  return t.length_nodes > r ? static_cast<double>(t.length_nodes - r) : 0.0;
}

}  // namespace

double moment_ratio(const MomentSums& sums, SizeMoment moment) noexcept {
  return moment == SizeMoment::first ? safe_ratio(sums.sum_s, sums.count)
                                     : safe_ratio(sums.sum_s2, sums.sum_s);
}

TrialStats summarize(std::span<const ClusterRecord> clusters, std::size_t length_nodes,
                     std::size_t r_max) {
  if (length_nodes < 2) {
    throw DomainError("a chain needs at least two nodes");
  }
  if (r_max >= length_nodes) {
    throw DomainError("r_max must be smaller than the number of nodes");
  }
  TrialStats t;
  t.length_nodes = length_nodes;
  t.connected_pairs.assign(r_max + 1, 0.0);
  t.connected_pairs[0] = static_cast<double>(length_nodes);
  t.histogram_all.assign(1, 0.0);
  t.histogram_restricted.assign(1, 0.0);

  for (const auto& c : clusters) {
    const std::size_t s = c.size_edges;
    t.all.add(static_cast<double>(s));
    if (s >= t.histogram_all.size()) {
      t.histogram_all.resize(s + 1, 0.0);
      t.histogram_restricted.resize(s + 1, 0.0);
    }
    t.histogram_all[s] += 1.0;
    if (c.open_count > 0) {
      t.restricted.add(static_cast<double>(s));
      t.histogram_restricted[s] += 1.0;
    }
    t.largest_cluster = std::max(t.largest_cluster, s);
    // A run of s edges holds s - r + 1 node pairs at separation r.
    for (std::size_t r = 1; r <= std::min(r_max, s); ++r) {
      t.connected_pairs[r] += static_cast<double>(s - r + 1);
    }
  }
  t.spanning = t.largest_cluster == length_nodes - 1;
  return t;
}

TrialStats summarize(const ChainSample& sample, std::size_t r_max) {
  return summarize(scan_clusters(sample), sample.length_nodes, r_max);
}

Estimate estimate_mean_cluster_size(std::span<const TrialStats> trials, bool restrict_min_one_open,
                                    SizeMoment moment) {
  require_trials(trials);
  std::vector<std::vector<double>> sums(2, std::vector<double>(trials.size()));
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const MomentSums& m = restrict_min_one_open ? trials[i].restricted : trials[i].all;
    if (moment == SizeMoment::first) {
      sums[0][i] = m.sum_s;
      sums[1][i] = m.count;
    } else {
      sums[0][i] = m.sum_s2;
      sums[1][i] = m.sum_s;
    }
  }
  Estimate e = jackknife(sums, [](std::span<const double> tot) { return safe_ratio(tot[0], tot[1]); });
  if (!std::isfinite(e.value)) {
    throw EstimationError(restrict_min_one_open
                              ? "no cluster with an open channel in any trial"
                              : "no clusters in any trial");
  }
  return e;
}

std::vector<Estimate> estimate_pair_connectivity(std::span<const TrialStats> trials,
                                                 std::size_t r_max) {
  require_trials(trials);
  if (r_max > stored_r_max(trials)) {
    throw DomainError("r_max exceeds the separations recorded in the trials");
  }
  std::vector<Estimate> out;
  out.reserve(r_max + 1);
  std::vector<std::vector<double>> sums(2, std::vector<double>(trials.size()));
  for (std::size_t r = 0; r <= r_max; ++r) {
    for (std::size_t i = 0; i < trials.size(); ++i) {
      sums[0][i] = trials[i].connected_pairs[r];
      sums[1][i] = pairs_at(trials[i], r);
    }
    out.push_back(jackknife(sums, [](std::span<const double> tot) { return safe_ratio(tot[0], tot[1]); }));
  }
  return out;
}

Estimate estimate_connectivity_ratio(std::span<const TrialStats> trials, std::size_t r) {
  require_trials(trials);
  if (r + 1 > stored_r_max(trials)) {
    throw DomainError("separation r + 1 is not recorded in the trials");
  }
  std::vector<std::vector<double>> sums(4, std::vector<double>(trials.size()));
  for (std::size_t i = 0; i < trials.size(); ++i) {
    sums[0][i] = trials[i].connected_pairs[r + 1];
    sums[1][i] = pairs_at(trials[i], r + 1);
    sums[2][i] = trials[i].connected_pairs[r];
    sums[3][i] = pairs_at(trials[i], r);
  }
  return jackknife(sums, [](std::span<const double> tot) {
    return safe_ratio(safe_ratio(tot[0], tot[1]), safe_ratio(tot[2], tot[3]));
  });
}

Estimate estimate_order_parameter(std::span<const TrialStats> trials) {
  require_trials(trials);
  std::vector<std::vector<double>> sums(2, std::vector<double>(trials.size(), 1.0));
  for (std::size_t i = 0; i < trials.size(); ++i) {
    sums[0][i] = static_cast<double>(trials[i].largest_cluster) /
                 static_cast<double>(trials[i].length_nodes - 1);
  }
  return jackknife(sums, [](std::span<const double> tot) { return tot[0] / tot[1]; });
}

SpanningEstimate spanning_probability(std::span<const TrialStats> trials) {
  require_trials(trials);
  SpanningEstimate out;
  out.trials = trials.size();
  out.spanning_trials = static_cast<std::size_t>(
      std::count_if(trials.begin(), trials.end(), [](const TrialStats& t) { return t.spanning; }));
  const double n = static_cast<double>(out.trials);
  out.fraction = static_cast<double>(out.spanning_trials) / n;
  const double smoothed = (static_cast<double>(out.spanning_trials) + 0.5) / (n + 1.0);
  out.std_error = std::sqrt(smoothed * (1.0 - smoothed) / n);
  return out;
}

}  // namespace qperc
