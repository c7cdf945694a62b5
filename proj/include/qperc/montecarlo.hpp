#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qperc/params.hpp"
#include "qperc/stats.hpp"

// Seeded sampling of finite open chains. A chain of L nodes has L - 1 edges;
// each edge ends up Open, Pair (perfect pair over a closed channel) or Closed.
// A communication cluster is a maximal run of non-Closed edges and its size
// is counted in edges.

namespace qperc {

/// How the two resources are laid on an edge.
enum class Convention {
  /// One categorical draw: Open with p, Pair with p_e, Closed otherwise.
  /// Requires p + p_e <= 1; connection probability p + p_e.
  paper_additive,
  /// Independent open mark (p) and pair mark (p_e); an edge carrying both
  /// counts as Open. Connection probability p + p_e - p p_e.
  independent_overlap,
  /// Open with p; filtering attempted only on closed channels, success p_e.
  /// Connection probability p + (1 - p) p_e.
  filter_closed_only,
};

const char* to_string(Convention convention) noexcept;
std::optional<Convention> parse_convention(std::string_view name) noexcept;

/// Throws DomainError (naming the other conventions) if the parameters are
/// not realizable under `convention`.
void validate_convention(const ModelParams& params, Convention convention);

/// Per-edge connection probability q under `convention`.
double effective_connectivity(const ModelParams& params, Convention convention);

/// Name of the pseudo-random generator behind sample_chain.
inline constexpr std::string_view kPrngName = "mt19937_64";
inline constexpr std::string_view kSeedMixerName = "splitmix64";

/// Seed for trial `trial_index`: the (trial_index + 1)-th output of a
/// splitmix64 stream whose state starts at `master_seed`, i.e. the splitmix64
/// finalizer applied to master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15.
std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) noexcept;

enum class EdgeState : std::uint8_t { closed = 0, open = 1, pair = 2 };

struct ChainSample {
  std::size_t length_nodes = 0;
  std::vector<EdgeState> edge_states;
  std::uint64_t seed_used = 0;
};

/// Draws edge states with std::mt19937_64 seeded by `seed`. Each uniform is
/// (draw >> 11) * 2^-53. paper_additive uses one uniform per edge;
/// independent_overlap always uses two; filter_closed_only draws the second
/// uniform only when the channel is closed.
ChainSample sample_chain(std::size_t length_nodes, const ModelParams& params, Convention convention,
                         std::uint64_t seed);

struct ClusterRecord {
  std::size_t size_edges = 0;
  std::size_t open_count = 0;
  std::size_t pair_count = 0;
  std::size_t start_index = 0;
};

/// Maximal runs of non-Closed edges, left to right.
std::vector<ClusterRecord> scan_clusters(std::span<const EdgeState> edges);
std::vector<ClusterRecord> scan_clusters(const ChainSample& sample);

/// Zeroth, first and second moments of cluster size over a set of clusters.
struct MomentSums {
  double count = 0.0;
  double sum_s = 0.0;
  double sum_s2 = 0.0;

  void add(double s) noexcept {
    count += 1.0;
    sum_s += s;
    sum_s2 += s * s;
  }
  MomentSums& operator+=(const MomentSums& o) noexcept {
    count += o.count;
    sum_s += o.sum_s;
    sum_s2 += o.sum_s2;
    return *this;
  }
};

/// Which average of cluster size to report.
enum class SizeMoment {
  /// sum s N_s / sum N_s. The observed count of s-clusters per edge is
  /// proportional to the cluster weight w_s, so with the open-channel
  /// restriction this converges to the closed-form mean_cluster_size.
  first,
  /// sum s^2 N_s / sum s N_s, the classical edge-weighted mean; for i.i.d.
  /// edges it converges to (1 + q) / (1 - q).
  second,
};

double moment_ratio(const MomentSums& sums, SizeMoment moment) noexcept;

/// Everything the estimators need from one sampled chain.
struct TrialStats {
  std::size_t length_nodes = 0;
  MomentSums all;
  /// Clusters containing at least one open channel.
  MomentSums restricted;
  std::size_t largest_cluster = 0;
  bool spanning = false;
  /// Connected node pairs at separation r, r = 0..r_max.
  std::vector<double> connected_pairs;
  /// Cluster counts indexed by size in edges (index 0 unused).
  std::vector<double> histogram_all;
  std::vector<double> histogram_restricted;
};

TrialStats summarize(std::span<const ClusterRecord> clusters, std::size_t length_nodes,
                     std::size_t r_max);
TrialStats summarize(const ChainSample& sample, std::size_t r_max);

/// Pooled mean cluster size with jackknife-over-trials stderr. Throws
/// EstimationError when no qualifying cluster exists.
Estimate estimate_mean_cluster_size(std::span<const TrialStats> trials,
                                    bool restrict_min_one_open = true,
                                    SizeMoment moment = SizeMoment::first);

/// g_hat(r) for r = 0..r_max: connected pairs at separation r over all pairs
/// at separation r, pooled over trials.
std::vector<Estimate> estimate_pair_connectivity(std::span<const TrialStats> trials,
                                                 std::size_t r_max);

/// g_hat(r + 1) / g_hat(r) with jackknife stderr.
Estimate estimate_connectivity_ratio(std::span<const TrialStats> trials, std::size_t r);

/// Mean over trials of largest-cluster edges / total edges.
Estimate estimate_order_parameter(std::span<const TrialStats> trials);

struct SpanningEstimate {
  double fraction = 0.0;
  std::size_t spanning_trials = 0;
  std::size_t trials = 0;
  /// Binomial stderr with the count smoothed to (k + 1/2) / (n + 1).
  double std_error = 0.0;
};

/// Fraction of trials whose whole chain is a single cluster.
SpanningEstimate spanning_probability(std::span<const TrialStats> trials);

/// Exact expectations for a short chain, by enumerating all 3^(L-1) edge
/// configurations.
struct ExactObservables {
  std::size_t length_nodes = 0;
  std::size_t configurations = 0;
  MomentSums expected_all;
  MomentSums expected_restricted;
  double order_parameter = 0.0;
  double spanning_probability = 0.0;
  /// Expected number of clusters of each size, index 0 unused.
  std::vector<double> expected_counts_all;
  std::vector<double> expected_counts_restricted;
  /// Exact g(r), r = 0..L-1.
  std::vector<double> pair_connectivity;

  /// Ratio of expectations; the limit of the pooled MC estimator.
  double mean_cluster_size(bool restrict_min_one_open = true,
                           SizeMoment moment = SizeMoment::first) const noexcept;
};

inline constexpr std::size_t kMaxEnumeratedNodes = 12;

/// Throws EnumerationLimitError for length_nodes outside [2, 12].
ExactObservables enumerate_exact(std::size_t length_nodes, const ModelParams& params,
                                 Convention convention);

struct GridPoint {
  double p = 0.0;
  double pe = 0.0;
};

struct SweepConfig {
  Convention convention = Convention::paper_additive;
  std::size_t length_nodes = 1'000'000;
  std::size_t trials = 50;
  std::uint64_t master_seed = 1;
  std::size_t r_max = 10;
  /// 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
  unsigned threads = 0;
};

struct SweepRow {
  GridPoint point;
  /// Set when the cell's parameters were rejected; estimates are then NaN.
  std::optional<std::string> error;
  /// First moment over clusters with at least one open channel.
  Estimate mean_cluster_size;
  /// Second moment over all clusters.
  Estimate mean_cluster_size_classical;
  Estimate order_parameter;
  SpanningEstimate spanning;
  std::vector<Estimate> pair_connectivity;
  std::vector<Estimate> connectivity_ratio;
  /// Pooled restricted cluster counts by size.
  std::vector<double> histogram_restricted;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;
};

/// Samples config.trials chains per grid cell. Trial i of every cell uses
/// derive_trial_seed(master_seed, i), and per-trial statistics are reduced in
/// trial order, so the result is bit-identical for any thread count.
SweepResult run_sweep(std::span<const GridPoint> grid, const SweepConfig& config);

}  // namespace qperc
