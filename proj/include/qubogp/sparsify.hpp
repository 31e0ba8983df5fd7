// sparsify.hpp - Forest Fire edge scores and score-based sparsification
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qubogp/graph.hpp"
#include "qubogp/rng.hpp"

namespace qubogp {

struct EdgeScores {
  std::vector<double> score;  // indexed by edge id (Graph::edges order)
  std::uint64_t seed = 0;
  double burn_probability = 0.7;
  std::size_t walks = 10;
};

struct ForestFireParams {
  double burn_probability = 0.7;
  std::size_t walks = 10;
  std::uint64_t seed = 0;
};

// Burn processes over the whole vertex set. Each process repeatedly ignites
// a uniformly random unburned vertex; a burning vertex spreads to a
// Geometric(1 - pf) number of its unburned neighbours (mean pf / (1 - pf)),
// and every edge the fire travels along gains one point.
inline EdgeScores forest_fire_scores(const Graph& g, const ForestFireParams& params) {
  const double pf = params.burn_probability;
  if (!(pf > 0.0 && pf < 1.0)) throw std::invalid_argument("burn probability must lie in (0, 1)");
  if (params.walks < 1) throw std::invalid_argument("walks must be at least 1");

  const std::size_t n = g.num_vertices();
  const auto edges = g.edges();
  EdgeScores out{std::vector<double>(edges.size(), 0.0), params.seed, pf, params.walks};
  Rng rng(params.seed);

  auto edge_id = [&](vertex_t a, vertex_t b) {
    const Edge e = a < b ? Edge{a, b} : Edge{b, a};
    return static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), e) - edges.begin());
  };

  std::vector<std::uint8_t> burned(n);
  std::vector<vertex_t> unburned(n);
  std::vector<std::size_t> slot(n);
  std::vector<vertex_t> frontier;
  std::vector<vertex_t> candidates;
  frontier.reserve(n);

  for (std::size_t walk = 0; walk < params.walks; ++walk) {
    std::fill(burned.begin(), burned.end(), 0);
    std::iota(unburned.begin(), unburned.end(), 0);
    std::iota(slot.begin(), slot.end(), 0);
    std::size_t remaining = n;
    auto burn = [&](vertex_t v) {
      burned[v] = 1;
      const std::size_t at = slot[v];
      const vertex_t last = unburned[--remaining];
      unburned[at] = last;
      slot[last] = at;
    };

    while (remaining > 0) {
      const vertex_t start = unburned[rng.below(remaining)];
      burn(start);
      frontier.clear();
      frontier.push_back(start);
      for (std::size_t head = 0; head < frontier.size(); ++head) {
        const vertex_t v = frontier[head];
        std::size_t spread = 0;
        while (rng.uniform() < pf) ++spread;
        if (spread == 0) continue;
        candidates.clear();
        for (vertex_t u : g.neighbors(v)) {
          if (!burned[u]) candidates.push_back(u);
        }
        spread = std::min(spread, candidates.size());
        for (std::size_t i = 0; i < spread; ++i) {
          std::swap(candidates[i], candidates[i + rng.below(candidates.size() - i)]);
          const vertex_t u = candidates[i];
          burn(u);
          out.score[edge_id(v, u)] += 1.0;
          frontier.push_back(u);
        }
      }
    }
  }
  return out;
}

// Number of edges kept: keep_ratio * m rounded half up.
inline std::size_t kept_edge_count(std::size_t m, double keep_ratio) {
  return static_cast<std::size_t>(std::floor(keep_ratio * static_cast<double>(m) + 0.5 + 1e-9));
}

// Keeps the kept_edge_count highest-scoring edges; equal scores prefer the
// lexicographically smaller edge.
inline Graph sparsify(const Graph& g, const EdgeScores& scores, double keep_ratio) {
  if (!(keep_ratio > 0.0 && keep_ratio <= 1.0)) throw std::invalid_argument("keep_ratio must lie in (0, 1]");
  const auto edges = g.edges();
  if (scores.score.size() != edges.size()) throw std::invalid_argument("edge scores do not match graph");
  const std::size_t keep = std::min(kept_edge_count(edges.size(), keep_ratio), edges.size());

  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores.score[a] > scores.score[b]; });
  std::vector<Edge> kept;
  kept.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) kept.push_back(edges[order[i]]);
  return Graph::from_edges(g.num_vertices(), kept, g.name());
}

// The sparsified graph shares the vertex set, so labels carry over as-is and
// only the cut has to be re-measured on the original edges.
inline std::size_t project_partition(const Graph& original, const Partition& p) {
  if (p.labels.size() != original.num_vertices()) {
    throw std::invalid_argument("partition vertex count does not match original graph");
  }
  return cut_edges(original, p);
}

}  // namespace qubogp
