#include <algorithm>
#include <array>
#include <numeric>
#include <string>

#include "qperc/errors.hpp"
#include "qperc/montecarlo.hpp"

namespace qperc {

namespace {

// Per-edge probabilities of Closed, Open, Pair (EdgeState order).
std::array<double, 3> state_probabilities(const ModelParams& params, Convention convention) {
  const double p = params.p();
  const double pe = params.pe();
  if (convention == Convention::paper_additive) {
    return {1.0 - p - pe, p, pe};
  }
  // Both remaining conventions reduce to the same marginals once an edge
  // that is open and filtered counts as Open.
  return {(1.0 - p) * (1.0 - pe), p, (1.0 - p) * pe};
}

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

double ExactObservables::mean_cluster_size(bool restrict_min_one_open,
                                           SizeMoment moment) const noexcept {
  return moment_ratio(restrict_min_one_open ? expected_restricted : expected_all, moment);
}

ExactObservables enumerate_exact(std::size_t length_nodes, const ModelParams& params,
                                 Convention convention) {
  if (length_nodes < 2 || length_nodes > kMaxEnumeratedNodes) {
    throw EnumerationLimitError("exact enumeration supports 2.." +
                                std::to_string(kMaxEnumeratedNodes) + " nodes, got " +
                                std::to_string(length_nodes));
  }
  validate_convention(params, convention);

  const std::size_t edges = length_nodes - 1;
  std::size_t configurations = 1;
  for (std::size_t i = 0; i < edges; ++i) configurations *= 3;

  const auto probs = state_probabilities(params, convention);
  ExactObservables out;
  out.length_nodes = length_nodes;
  out.configurations = configurations;
  out.expected_counts_all.assign(length_nodes, 0.0);
  out.expected_counts_restricted.assign(length_nodes, 0.0);
  out.pair_connectivity.assign(length_nodes, 0.0);

  std::vector<int> states(edges);
  std::vector<std::size_t> nodes_in(length_nodes);
  std::vector<bool> has_open(length_nodes);

  for (std::size_t code = 0; code < configurations; ++code) {
    double weight = 1.0;
    std::size_t rest = code;
    for (std::size_t e = 0; e < edges; ++e) {
      states[e] = static_cast<int>(rest % 3);
      rest /= 3;
      weight *= probs[states[e]];
    }
    if (weight == 0.0) continue;

    DisjointSet components(length_nodes);
    for (std::size_t e = 0; e < edges; ++e) {
      if (states[e] != static_cast<int>(EdgeState::closed)) components.unite(e, e + 1);
    }
    std::fill(nodes_in.begin(), nodes_in.end(), 0);
    std::fill(has_open.begin(), has_open.end(), false);
    for (std::size_t v = 0; v < length_nodes; ++v) ++nodes_in[components.find(v)];
    for (std::size_t e = 0; e < edges; ++e) {
      if (states[e] == static_cast<int>(EdgeState::open)) has_open[components.find(e)] = true;
    }

    std::size_t largest = 0;
    for (std::size_t root = 0; root < length_nodes; ++root) {
      if (nodes_in[root] < 2) continue;
      const std::size_t s = nodes_in[root] - 1;
      const double size = static_cast<double>(s);
      largest = std::max(largest, s);
      out.expected_all.count += weight;
      out.expected_all.sum_s += weight * size;
      out.expected_all.sum_s2 += weight * size * size;
      out.expected_counts_all[s] += weight;
      if (has_open[root]) {
        out.expected_restricted.count += weight;
        out.expected_restricted.sum_s += weight * size;
        out.expected_restricted.sum_s2 += weight * size * size;
        out.expected_counts_restricted[s] += weight;
      }
    }
    out.order_parameter += weight * static_cast<double>(largest) / static_cast<double>(edges);
    if (largest == edges) out.spanning_probability += weight;

    for (std::size_t r = 0; r < length_nodes; ++r) {
      std::size_t joined = 0;
      for (std::size_t i = 0; i + r < length_nodes; ++i) {
        if (components.find(i) == components.find(i + r)) ++joined;
      }
      out.pair_connectivity[r] +=
          weight * static_cast<double>(joined) / static_cast<double>(length_nodes - r);
    }
  }
  return out;
}

}  // namespace qperc
