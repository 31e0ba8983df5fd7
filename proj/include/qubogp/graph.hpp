// graph.hpp - undirected unweighted graphs, partitions and cut arithmetic
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qubogp {

using vertex_t = std::uint32_t;

struct Edge {
  vertex_t u;
  vertex_t v;  // u < v

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Immutable undirected graph stored as sorted adjacency lists (CSR layout).
// Vertices are 0-based. Self-loops and parallel edges never survive
// construction.
class Graph {
 public:
  Graph() = default;

  // Builds from an arbitrary edge list: endpoints may come in either order,
  // duplicates are merged and self-loops dropped. Throws on out-of-range ids.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges,
                          std::string name = {}) {
    std::vector<Edge> clean;
    clean.reserve(edges.size());
    for (Edge e : edges) {
      if (e.u >= n || e.v >= n) {
        throw std::invalid_argument("edge endpoint out of range");
      }
      if (e.u == e.v) continue;
      if (e.u > e.v) std::swap(e.u, e.v);
      clean.push_back(e);
    }
    std::sort(clean.begin(), clean.end());
    clean.erase(std::unique(clean.begin(), clean.end()), clean.end());

    Graph g;
    g.name_ = std::move(name);
    g.offsets_.assign(n + 1, 0);
    for (const Edge& e : clean) {
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.neighbors_.resize(g.offsets_[n]);
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const Edge& e : clean) {
      g.neighbors_[fill[e.u]++] = e.v;
      g.neighbors_[fill[e.v]++] = e.u;
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::sort(g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
                g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
    }
    g.edges_ = std::move(clean);
    return g;
  }

  std::size_t num_vertices() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return edges_.size(); }

  std::span<const vertex_t> neighbors(vertex_t v) const {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(vertex_t v) const { return offsets_[v + 1] - offsets_[v]; }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (vertex_t v = 0; v < num_vertices(); ++v) d = std::max(d, degree(v));
    return d;
  }

  // |E| / |V|, the density measure used in the benchmark tables.
  double average_degree() const {
    return num_vertices() == 0
               ? 0.0
               : static_cast<double>(num_edges()) / static_cast<double>(num_vertices());
  }

  bool has_edge(vertex_t u, vertex_t v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  // Edges in lexicographic (u, v) order with u < v; the index into this list
  // is the edge id.
  std::span<const Edge> edges() const { return edges_; }

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.offsets_ == b.offsets_ && a.neighbors_ == b.neighbors_;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<vertex_t> neighbors_;
  std::vector<Edge> edges_;
  std::string name_;
};

struct Partition {
  std::vector<std::uint32_t> labels;
  std::uint32_t k = 2;

  std::size_t size() const { return labels.size(); }

  std::vector<std::size_t> part_sizes() const {
    std::vector<std::size_t> sizes(k, 0);
    for (auto l : labels) ++sizes.at(l);
    return sizes;
  }

  void validate(std::size_t n) const {
    if (labels.size() != n) throw std::invalid_argument("partition length does not match graph");
    for (auto l : labels) {
      if (l >= k) throw std::invalid_argument("partition label out of range");
    }
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

inline std::size_t cut_edges(const Graph& g, const Partition& p) {
  p.validate(g.num_vertices());
  std::size_t cut = 0;
  for (const Edge& e : g.edges()) {
    if (p.labels[e.u] != p.labels[e.v]) ++cut;
  }
  return cut;
}

// Size bounds for a balanced partition.
//
// k == 2: the bounds apply to part 1 (the vertices whose indicator is set).
//   eps == 0 -> [ceil(n/2), ceil(n/2)]
//   eps  > 0 -> [n - upper, upper] with upper = floor((1+eps) ceil(n/2)), so
//               neither side exceeds upper.
// k > 2: the bounds apply to every part,
//   upper = floor((1+eps) ceil(n/k)),
//   lower = min(ceil((1-eps) ceil(n/k)), floor(n/k)).
struct BalanceBounds {
  std::size_t lower = 0;
  std::size_t upper = 0;

  friend bool operator==(const BalanceBounds&, const BalanceBounds&) = default;
};

namespace detail {
inline constexpr double kRoundingSlack = 1e-9;
}

inline BalanceBounds balance_bounds(std::size_t n, std::size_t k, double epsilon) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be non-negative");
  const std::size_t target = (n + k - 1) / k;
  const auto scaled_floor = [&](double f) {
    return static_cast<std::size_t>(std::floor(f * static_cast<double>(target) + detail::kRoundingSlack));
  };
  if (epsilon == 0.0) {
    if (k == 2) return {target, target};
    return {n / k, target};
  }
  const std::size_t upper = scaled_floor(1.0 + epsilon);
  if (k == 2) return {upper >= n ? 0 : n - upper, upper};
  const double lo = std::ceil((1.0 - epsilon) * static_cast<double>(target) - detail::kRoundingSlack);
  const std::size_t lower = lo <= 0.0 ? 0 : std::min(static_cast<std::size_t>(lo), n / k);
  return {lower, upper};
}

// Per-part [lower, upper] bounds, expanded so that k == 2 also constrains
// part 0 (its size is n minus the size of part 1).
inline std::vector<BalanceBounds> part_bounds(std::size_t n, std::size_t k, double epsilon) {
  const BalanceBounds b = balance_bounds(n, k, epsilon);
  if (k == 2) {
    const std::size_t hi = std::min(b.upper, n);
    return {{n - hi, n - std::min(b.lower, n)}, {b.lower, hi}};
  }
  return std::vector<BalanceBounds>(k, b);
}

inline bool is_balanced(const Partition& p, std::size_t n, double epsilon) {
  const auto bounds = part_bounds(n, p.k, epsilon);
  const auto sizes = p.part_sizes();
  for (std::size_t j = 0; j < p.k; ++j) {
    if (sizes[j] < bounds[j].lower || sizes[j] > bounds[j].upper) return false;
  }
  return true;
}

inline Partition complement(const Partition& p) {
  if (p.k != 2) throw std::invalid_argument("complement is only defined for bipartitions");
  Partition out = p;
  for (auto& l : out.labels) l = 1 - l;
  return out;
}

}  // namespace qubogp
