// evaluate.hpp - decoding, balance repair and quality metrics
#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qubogp/format.hpp"
#include "qubogp/graph.hpp"
#include "qubogp/graph_io.hpp"
#include "qubogp/qubo.hpp"

namespace qubogp {

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Feasibility {
  bool one_hot_ok = true;
  bool balance_ok = true;
  std::vector<std::size_t> part_sizes;  // indicator column sums

  bool feasible() const { return one_hot_ok && balance_ok; }
};

struct Decoded {
  Partition partition;
  Feasibility feasibility;
};

inline Decoded decode(const QuboModel& model, std::span<const std::uint8_t> a) {
  const auto& meta = model.meta();
  if (!meta) throw std::invalid_argument("model has no partition metadata");
  if (a.size() != model.num_vars()) throw std::invalid_argument("assignment length does not match model");
  Decoded out;
  out.partition.k = meta->k;
  out.partition.labels.assign(meta->n, 0);
  out.feasibility.part_sizes = indicator_part_sizes(model, a);

  if (!model.kway_layout()) {
    for (std::size_t v = 0; v < meta->n; ++v) out.partition.labels[v] = a[v];
  } else {
    for (std::size_t v = 0; v < meta->n; ++v) {
      std::size_t set = 0;
      std::optional<std::uint32_t> first;
      for (std::uint32_t j = 0; j < meta->k; ++j) {
        if (a[v * meta->k + j]) {
          ++set;
          if (!first) first = j;
        }
      }
      if (set != 1) out.feasibility.one_hot_ok = false;
      out.partition.labels[v] = first.value_or(0);
    }
  }

  const auto bounds = part_bounds(meta->n, meta->k, meta->epsilon);
  for (std::size_t j = 0; j < meta->k; ++j) {
    const std::size_t s = out.feasibility.part_sizes[j];
    if (s < bounds[j].lower || s > bounds[j].upper) out.feasibility.balance_ok = false;
  }
  return out;
}

// Greedy balance repair. While a part is outside its bounds, move the vertex
// whose relocation into the part with the most room (or the largest deficit)
// raises the cut the least, taking vertices from overfull parts first and
// otherwise from any part above its lower bound. Ties go to the lowest
// vertex id. At most n moves.
inline Partition repair(const Graph& g, const Partition& p, std::size_t k, double epsilon) {
  const std::size_t n = g.num_vertices();
  if (p.k != k) throw std::invalid_argument("partition k does not match");
  p.validate(n);
  const auto bounds = part_bounds(n, k, epsilon);
  std::size_t lower_sum = 0, upper_sum = 0;
  for (const auto& b : bounds) {
    lower_sum += b.lower;
    upper_sum += b.upper;
  }
  if (k > n || lower_sum > n || upper_sum < n) {
    throw InfeasibleError("balance bounds cannot be met for n=" + std::to_string(n) + ", k=" + std::to_string(k));
  }

  Partition out = p;
  auto sizes = out.part_sizes();
  auto violated = [&] {
    for (std::size_t j = 0; j < k; ++j) {
      if (sizes[j] < bounds[j].lower || sizes[j] > bounds[j].upper) return true;
    }
    return false;
  };
  if (!violated()) return out;

  // conn[v * k + j] = neighbours of v currently in part j
  std::vector<std::uint32_t> conn(n * k, 0);
  for (vertex_t v = 0; v < n; ++v) {
    for (vertex_t u : g.neighbors(v)) ++conn[v * k + out.labels[u]];
  }

  while (violated()) {
    std::size_t target = k;
    long long best_need = std::numeric_limits<long long>::min();
    bool deficit = false;
    for (std::size_t j = 0; j < k; ++j) {
      if (sizes[j] < bounds[j].lower) deficit = true;
    }
    for (std::size_t j = 0; j < k; ++j) {
      const auto lo = static_cast<long long>(bounds[j].lower);
      const auto hi = static_cast<long long>(bounds[j].upper);
      const auto s = static_cast<long long>(sizes[j]);
      const long long need = deficit ? lo - s : hi - s;
      if (need > 0 && need > best_need) {
        best_need = need;
        target = j;
      }
    }
    bool any_over = false;
    for (std::size_t j = 0; j < k; ++j) {
      if (sizes[j] > bounds[j].upper) any_over = true;
    }
    auto is_source = [&](std::size_t j) {
      if (j == target) return false;
      return any_over ? sizes[j] > bounds[j].upper : sizes[j] > bounds[j].lower;
    };

    vertex_t best_v = 0;
    long long best_cost = std::numeric_limits<long long>::max();
    for (vertex_t v = 0; v < n; ++v) {
      const std::uint32_t from = out.labels[v];
      if (!is_source(from)) continue;
      const long long cost = static_cast<long long>(conn[v * k + from]) - static_cast<long long>(conn[v * k + target]);
      if (cost < best_cost) {
        best_cost = cost;
        best_v = v;
      }
    }
    if (target == k || best_cost == std::numeric_limits<long long>::max()) {
      throw InfeasibleError("repair found no admissible move");
    }
    const std::uint32_t from = out.labels[best_v];
    out.labels[best_v] = static_cast<std::uint32_t>(target);
    --sizes[from];
    ++sizes[target];
    for (vertex_t u : g.neighbors(best_v)) {
      --conn[u * k + from];
      ++conn[u * k + target];
    }
  }
  return out;
}

// cut / best_known. A zero best-known value gives 1 for a zero cut and is
// otherwise undefined (nullopt).
inline std::optional<double> approximation_ratio(std::size_t cut, std::size_t best_known) {
  if (best_known == 0) return cut == 0 ? std::optional<double>(1.0) : std::nullopt;
  return static_cast<double>(cut) / static_cast<double>(best_known);
}

// Partition files: optional "% graph=<id> k=<k> epsilon=<eps>" header, then
// one 0-based label per line.
inline std::string write_partition(const Partition& p, std::string_view graph_id, double epsilon) {
  std::ostringstream out;
  out << "% graph=" << graph_id << " k=" << p.k << " epsilon=" << format_real(epsilon) << '\n';
  for (auto l : p.labels) out << l << '\n';
  return out.str();
}

struct PartitionFile {
  Partition partition;
  std::string graph_id;
  std::optional<double> epsilon;
};

inline PartitionFile parse_partition(std::string_view text, std::optional<std::uint32_t> k = std::nullopt) {
  PartitionFile out;
  std::optional<std::uint32_t> header_k;
  const auto lines = detail::split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto toks = detail::split_ws(lines[li]);
    if (toks.empty()) continue;
    if (toks[0][0] == '%' || toks[0][0] == '#') {
      for (auto tok : toks) {
        auto eq = tok.find('=');
        if (eq == std::string_view::npos) continue;
        auto key = tok.substr(0, eq);
        auto val = tok.substr(eq + 1);
        if (key.starts_with('%') || key.starts_with('#')) key.remove_prefix(1);
        if (key == "graph") out.graph_id = std::string(val);
        if (key == "k") {
          std::uint32_t kk = 0;
          if (!detail::parse_number(val, kk)) throw ParseError("bad k in header", li + 1);
          header_k = kk;
        }
        if (key == "epsilon") {
          double e = 0.0;
          if (!detail::parse_number(val, e)) throw ParseError("bad epsilon in header", li + 1);
          out.epsilon = e;
        }
      }
      continue;
    }
    std::uint32_t label = 0;
    if (toks.size() != 1 || !detail::parse_number(toks[0], label)) throw ParseError("expected one label", li + 1);
    out.partition.labels.push_back(label);
  }
  std::uint32_t max_label = 0;
  for (auto l : out.partition.labels) max_label = std::max(max_label, l);
  out.partition.k = k.value_or(header_k.value_or(std::max<std::uint32_t>(2, max_label + 1)));
  for (auto l : out.partition.labels) {
    if (l >= out.partition.k) throw ParseError("label " + std::to_string(l) + " exceeds k", 0);
  }
  return out;
}

}  // namespace qubogp
