#include <random>
#include <string>

#include "qperc/errors.hpp"
#include "qperc/montecarlo.hpp"

namespace qperc {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

const char* to_string(Convention convention) noexcept {
  switch (convention) {
    case Convention::paper_additive:
      return "paper_additive";
    case Convention::independent_overlap:
      return "independent_overlap";
    case Convention::filter_closed_only:
      return "filter_closed_only";
  }
  return "unknown";
}

std::optional<Convention> parse_convention(std::string_view name) noexcept {
  for (auto c : {Convention::paper_additive, Convention::independent_overlap,
                 Convention::filter_closed_only}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

void validate_convention(const ModelParams& params, Convention convention) {
  if (convention == Convention::paper_additive && params.connectivity() > 1.0) {
    throw DomainError("paper_additive needs p + p_e <= 1 (got p = " + std::to_string(params.p()) +
                      ", p_e = " + std::to_string(params.pe()) +
                      "); use independent_overlap or filter_closed_only instead");
  }
}

double effective_connectivity(const ModelParams& params, Convention convention) {
  const double p = params.p();
  const double pe = params.pe();
  switch (convention) {
    case Convention::paper_additive:
      return p + pe;
    case Convention::independent_overlap:
      return p + pe - p * pe;
    case Convention::filter_closed_only:
      return p + (1.0 - p) * pe;
  }
  return 0.0;
}

std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) noexcept {
  std::uint64_t z = master_seed + (trial_index + 1) * kGoldenGamma;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ChainSample sample_chain(std::size_t length_nodes, const ModelParams& params, Convention convention,
                         std::uint64_t seed) {
  if (length_nodes < 2) {
    throw DomainError("a chain needs at least two nodes");
  }
  validate_convention(params, convention);

  ChainSample sample;
  sample.length_nodes = length_nodes;
  sample.seed_used = seed;
  sample.edge_states.resize(length_nodes - 1);

  std::mt19937_64 rng(seed);
  const double p = params.p();
  const double pe = params.pe();
  const double additive_cut = p + pe;

  for (auto& state : sample.edge_states) {
    const double u = to_unit(rng());
    switch (convention) {
      case Convention::paper_additive:
        state = u < p ? EdgeState::open : (u < additive_cut ? EdgeState::pair : EdgeState::closed);
        break;
      case Convention::independent_overlap: {
        const double v = to_unit(rng());
        state = u < p ? EdgeState::open : (v < pe ? EdgeState::pair : EdgeState::closed);
        break;
      }
      case Convention::filter_closed_only:
        if (u < p) {
          state = EdgeState::open;
        } else {
          state = to_unit(rng()) < pe ? EdgeState::pair : EdgeState::closed;
        }
        break;
    }
  }
  return sample;
}

std::vector<ClusterRecord> scan_clusters(std::span<const EdgeState> edges) {
  std::vector<ClusterRecord> clusters;
  ClusterRecord current;
  bool inside = false;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const EdgeState state = edges[i];
    if (state == EdgeState::closed) {
      if (inside) {
        clusters.push_back(current);
        inside = false;
      }
      continue;
    }
    if (!inside) {
      current = ClusterRecord{.start_index = i};
      inside = true;
    }
    ++current.size_edges;
    if (state == EdgeState::open) {
      ++current.open_count;
    } else {
      ++current.pair_count;
    }
  }
  if (inside) clusters.push_back(current);
  return clusters;
}

std::vector<ClusterRecord> scan_clusters(const ChainSample& sample) {
  return scan_clusters(std::span<const EdgeState>(sample.edge_states));
}

}  // namespace qperc
