#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "qperc/errors.hpp"
#include "qperc/montecarlo.hpp"

namespace qperc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<TrialStats> run_trials(const ModelParams& params, const SweepConfig& config) {
  std::vector<TrialStats> stats(config.trials);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < config.trials; i = next++) {
      const auto sample = sample_chain(config.length_nodes, params, config.convention,
                                       derive_trial_seed(config.master_seed, i));
      stats[i] = summarize(sample, config.r_max);
    }
  };

  unsigned threads = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(1, config.trials)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  return stats;
}

Estimate estimate_or_nan(auto&& fn) {
  try {
    return fn();
  } catch (const EstimationError&) {
    return Estimate{kNaN, kNaN};
  }
}

}  // namespace

SweepResult run_sweep(std::span<const GridPoint> grid, const SweepConfig& config) {
  if (config.trials == 0) {
    throw DomainError("a sweep needs at least one trial");
  }
  if (config.length_nodes < 2) {
    throw DomainError("a chain needs at least two nodes");
  }
  if (config.r_max + 1 >= config.length_nodes) {
    throw DomainError("r_max must be at most length_nodes - 2");
  }

  SweepResult result;
  result.config = config;
  result.rows.reserve(grid.size());
  for (const GridPoint& point : grid) {
    SweepRow row;
    row.point = point;
    try {
      const ModelParams params(point.p, point.pe);
      validate_convention(params, config.convention);
    } catch (const DomainError& e) {
      row.error = e.what();
      row.mean_cluster_size = row.mean_cluster_size_classical = row.order_parameter = {kNaN, kNaN};
      row.spanning.fraction = row.spanning.std_error = kNaN;
      result.rows.push_back(std::move(row));
      continue;
    }

    const auto stats = run_trials(ModelParams(point.p, point.pe), config);
    row.mean_cluster_size = estimate_or_nan([&] { return estimate_mean_cluster_size(stats); });
    row.mean_cluster_size_classical = estimate_or_nan(
        [&] { return estimate_mean_cluster_size(stats, false, SizeMoment::second); });
    row.order_parameter = estimate_order_parameter(stats);
    row.spanning = spanning_probability(stats);
    row.pair_connectivity = estimate_pair_connectivity(stats, config.r_max);
    for (std::size_t r = 0; r < config.r_max; ++r) {
      row.connectivity_ratio.push_back(estimate_connectivity_ratio(stats, r));
    }
    for (const auto& t : stats) {
      if (t.histogram_restricted.size() > row.histogram_restricted.size()) {
        row.histogram_restricted.resize(t.histogram_restricted.size(), 0.0);
      }
      for (std::size_t s = 0; s < t.histogram_restricted.size(); ++s) {
        row.histogram_restricted[s] += t.histogram_restricted[s];
      }
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace qperc
