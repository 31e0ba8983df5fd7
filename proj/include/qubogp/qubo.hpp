// qubo.hpp - QUBO models and their compilation from balanced partitioning
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qubogp/graph.hpp"

namespace qubogp {

using var_t = std::uint32_t;

// 0/1 value per model variable.
using Assignment = std::vector<std::uint8_t>;

struct QuadTerm {
  var_t i;  // i < j
  var_t j;
  double coeff;

  friend bool operator==(const QuadTerm&, const QuadTerm&) = default;
};

enum class VarKind : std::uint8_t { indicator, slack };

// What a model variable stands for. Indicators are x_{vertex,part}; slack
// bits carry their weight in the binary expansion of their chain.
struct VarRole {
  VarKind kind = VarKind::indicator;
  vertex_t vertex = 0;
  std::uint32_t part = 0;
  std::uint32_t chain = 0;
  double weight = 0.0;

  friend bool operator==(const VarRole&, const VarRole&) = default;
};

// Slack bits of one part's balance constraint: size(part) + sum w_b s_b = bound.
struct SlackChain {
  std::uint32_t part = 0;
  std::size_t bound = 0;
  std::vector<var_t> vars;

  friend bool operator==(const SlackChain&, const SlackChain&) = default;
};

struct PartitionMeta {
  std::uint32_t k = 2;
  double epsilon = 0.0;
  std::size_t n = 0;

  friend bool operator==(const PartitionMeta&, const PartitionMeta&) = default;
};

// Binary quadratic objective: constant + sum linear_i a_i + sum_{i<j} q_ij a_i a_j.
class QuboModel {
 public:
  std::size_t num_vars() const { return linear_.size(); }
  std::span<const double> linear() const { return linear_; }
  // Sorted by (i, j), one entry per unordered pair, no zero coefficients.
  std::span<const QuadTerm> quadratic() const { return quadratic_; }
  double constant() const { return constant_; }
  double penalty() const { return penalty_; }

  std::span<const VarRole> var_map() const { return var_map_; }
  std::span<const SlackChain> slack_chains() const { return chains_; }
  const std::optional<PartitionMeta>& meta() const { return meta_; }

  // Variable index of indicator x_{vertex,part}.
  var_t indicator(vertex_t v, std::uint32_t part) const {
    if (!meta_) throw std::logic_error("model has no partition metadata");
    if (meta_->k == 2 && !kway_layout_) {
      if (part != 1) throw std::invalid_argument("bipartition models only index part 1");
      return v;
    }
    return static_cast<var_t>(v * meta_->k + part);
  }
  bool kway_layout() const { return kway_layout_; }

  std::size_t num_indicators() const {
    if (!meta_) return 0;
    return kway_layout_ ? meta_->n * meta_->k : meta_->n;
  }

  friend bool operator==(const QuboModel&, const QuboModel&) = default;

 private:
  friend class QuboBuilder;

  std::vector<double> linear_;
  std::vector<QuadTerm> quadratic_;
  double constant_ = 0.0;
  double penalty_ = 0.0;
  std::vector<VarRole> var_map_;
  std::vector<SlackChain> chains_;
  std::optional<PartitionMeta> meta_;
  bool kway_layout_ = false;
};

// Accumulates coefficients and compiles them into a QuboModel. Quadratic
// contributions are collected as triplets and merged once in finish().
class QuboBuilder {
 public:
  explicit QuboBuilder(std::size_t num_vars = 0) : linear_(num_vars, 0.0), roles_(num_vars) {}

  var_t add_var(VarRole role = {}) {
    linear_.push_back(0.0);
    roles_.push_back(role);
    return static_cast<var_t>(linear_.size() - 1);
  }
  void set_role(var_t v, VarRole role) { roles_.at(v) = role; }
  std::size_t num_vars() const { return linear_.size(); }

  void add_constant(double c) { constant_ += c; }
  void add_linear(var_t i, double c) { linear_.at(i) += c; }
  void add_quadratic(var_t i, var_t j, double c) {
    if (i == j) {
      // a_i^2 = a_i for binary variables
      add_linear(i, c);
      return;
    }
    if (i > j) std::swap(i, j);
    if (j >= linear_.size()) throw std::out_of_range("quadratic term index out of range");
    triplets_.push_back({i, j, c});
  }

  // weight * (sum_v coeff_v a_v - target)^2, with distinct variables.
  void add_squared_residual(std::span<const std::pair<var_t, double>> terms, double target, double weight) {
    add_constant(weight * target * target);
    for (std::size_t a = 0; a < terms.size(); ++a) {
      const auto [va, wa] = terms[a];
      add_linear(va, weight * (wa * wa - 2.0 * target * wa));
      for (std::size_t b = a + 1; b < terms.size(); ++b) {
        add_quadratic(va, terms[b].first, 2.0 * weight * wa * terms[b].second);
      }
    }
  }

  void reserve_quadratic(std::size_t count) { triplets_.reserve(count); }
  void set_penalty(double p) { penalty_ = p; }
  void set_meta(PartitionMeta meta, bool kway_layout) {
    meta_ = meta;
    kway_layout_ = kway_layout;
  }
  void add_chain(SlackChain chain) { chains_.push_back(std::move(chain)); }
  std::size_t num_chains() const { return chains_.size(); }

  QuboModel finish() && {
    std::sort(triplets_.begin(), triplets_.end(), [](const QuadTerm& a, const QuadTerm& b) {
      return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    std::vector<QuadTerm> merged;
    merged.reserve(triplets_.size());
    for (const QuadTerm& t : triplets_) {
      if (!merged.empty() && merged.back().i == t.i && merged.back().j == t.j) {
        merged.back().coeff += t.coeff;
      } else {
        merged.push_back(t);
      }
    }
    std::erase_if(merged, [](const QuadTerm& t) { return t.coeff == 0.0; });
    triplets_.clear();
    triplets_.shrink_to_fit();

    QuboModel m;
    m.linear_ = std::move(linear_);
    m.quadratic_ = std::move(merged);
    m.quadratic_.shrink_to_fit();
    m.constant_ = constant_;
    m.penalty_ = penalty_;
    m.var_map_ = std::move(roles_);
    m.chains_ = std::move(chains_);
    m.meta_ = meta_;
    m.kway_layout_ = kway_layout_;
    return m;
  }

 private:
  std::vector<double> linear_;
  std::vector<VarRole> roles_;
  std::vector<QuadTerm> triplets_;
  std::vector<SlackChain> chains_;
  double constant_ = 0.0;
  double penalty_ = 0.0;
  std::optional<PartitionMeta> meta_;
  bool kway_layout_ = false;
};

inline double energy(const QuboModel& model, std::span<const std::uint8_t> a) {
  if (a.size() != model.num_vars()) throw std::invalid_argument("assignment length does not match model");
  double e = model.constant();
  const auto lin = model.linear();
  for (std::size_t i = 0; i < lin.size(); ++i) {
    if (a[i]) e += lin[i];
  }
  for (const QuadTerm& t : model.quadratic()) {
    if (a[t.i] && a[t.j]) e += t.coeff;
  }
  return e;
}

// Capped binary expansion: 1, 2, 4, ..., 2^(b-2), range - (2^(b-1) - 1) with
// b = ceil(log2(range + 1)). Subset sums are exactly {0, ..., range}.
inline std::vector<std::size_t> encode_slack_weights(std::size_t range) {
  std::vector<std::size_t> w;
  std::size_t covered = 0;  // sum of weights so far = 2^len - 1
  while (covered < range) {
    const std::size_t next = covered + 1;
    if (covered + next >= range) {
      w.push_back(range - covered);
      break;
    }
    w.push_back(next);
    covered += next;
  }
  return w;
}

// P = d_max + 1: larger than any single-vertex change of the cut.
inline double default_penalty(const Graph& g) { return static_cast<double>(g.max_degree()) + 1.0; }

// nullopt selects default_penalty.
using PenaltyChoice = std::optional<double>;

namespace detail {

inline double resolve_penalty(const Graph& g, PenaltyChoice penalty) {
  if (!penalty) return default_penalty(g);
  if (!(*penalty > 0.0) || !std::isfinite(*penalty)) throw std::invalid_argument("penalty must be positive");
  return *penalty;
}

// Penalises sum_{v in members} a_v against [bounds.lower, bounds.upper]. A
// point interval becomes an equality; otherwise one slack chain s in
// [0, upper - lower] enforces size + s = upper, which bounds the size from
// both sides.
inline void add_balance_penalty(QuboBuilder& b, std::span<const var_t> members, std::uint32_t part,
                                BalanceBounds bounds, double p) {
  std::vector<std::pair<var_t, double>> terms;
  terms.reserve(members.size() + 64);
  for (var_t v : members) terms.emplace_back(v, 1.0);

  if (bounds.lower < bounds.upper) {
    SlackChain chain{part, bounds.upper, {}};
    const auto chain_id = static_cast<std::uint32_t>(b.num_chains());
    for (std::size_t w : encode_slack_weights(bounds.upper - bounds.lower)) {
      const double wd = static_cast<double>(w);
      const var_t s = b.add_var({VarKind::slack, 0, part, chain_id, wd});
      chain.vars.push_back(s);
      terms.emplace_back(s, wd);
    }
    b.add_chain(std::move(chain));
  }
  b.add_squared_residual(terms, static_cast<double>(bounds.upper), p);
}

}  // namespace detail


// Objective x^T L x plus P (x^T 1 - target)^2, one indicator per vertex
// (x_i = 1 puts vertex i in part 1). With epsilon > 0 a slack chain lets the
// part-1 size range over balance_bounds(n, 2, epsilon).
inline QuboModel build_bipartition_qubo(const Graph& g, double epsilon, PenaltyChoice penalty = std::nullopt) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be non-negative");
  const double p = detail::resolve_penalty(g, penalty);
  const std::size_t n = g.num_vertices();

  QuboBuilder b(n);
  b.reserve_quadratic(g.num_edges() + n * (n - (n > 0)) / 2);
  for (vertex_t v = 0; v < n; ++v) {
    b.set_role(v, {VarKind::indicator, v, 1, 0, 0.0});
    b.add_linear(v, static_cast<double>(g.degree(v)));
  }
  for (const Edge& e : g.edges()) b.add_quadratic(e.u, e.v, -2.0);

  std::vector<var_t> members(n);
  for (vertex_t v = 0; v < n; ++v) members[v] = v;
  detail::add_balance_penalty(b, members, 1, balance_bounds(n, 2, epsilon), p);

  b.set_penalty(p);
  b.set_meta({2, epsilon, n}, false);
  return std::move(b).finish();
}

// Indicators x_{i,j} at index i*k + j. Objective 1/2 sum_j x_j^T L x_j, a
// one-hot penalty per vertex and a balance penalty per part.
inline QuboModel build_kway_qubo(const Graph& g, std::size_t k, double epsilon, PenaltyChoice penalty = std::nullopt) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be non-negative");
  const std::size_t n = g.num_vertices();
  if (k > n) throw std::invalid_argument("k exceeds the number of vertices");
  const double p = detail::resolve_penalty(g, penalty);
  const auto kk = static_cast<std::uint32_t>(k);

  QuboBuilder b(n * k);
  b.reserve_quadratic(k * g.num_edges() + n * k * (k - 1) / 2 + k * n * (n - 1) / 2);
  for (vertex_t v = 0; v < n; ++v) {
    for (std::uint32_t j = 0; j < kk; ++j) {
      const var_t x = static_cast<var_t>(v * kk + j);
      b.set_role(x, {VarKind::indicator, v, j, 0, 0.0});
      b.add_linear(x, 0.5 * static_cast<double>(g.degree(v)));
    }
  }
  for (const Edge& e : g.edges()) {
    for (std::uint32_t j = 0; j < kk; ++j) b.add_quadratic(e.u * kk + j, e.v * kk + j, -1.0);
  }

  std::vector<std::pair<var_t, double>> row(k);
  for (vertex_t v = 0; v < n; ++v) {
    for (std::uint32_t j = 0; j < kk; ++j) row[j] = {static_cast<var_t>(v * kk + j), 1.0};
    b.add_squared_residual(row, 1.0, p);
  }

  const auto bounds = part_bounds(n, k, epsilon);
  std::vector<var_t> members(n);
  for (std::uint32_t j = 0; j < kk; ++j) {
    for (vertex_t v = 0; v < n; ++v) members[v] = static_cast<var_t>(v * kk + j);
    detail::add_balance_penalty(b, members, j, bounds[j], p);
  }

  b.set_penalty(p);
  b.set_meta({kk, epsilon, n}, true);
  return std::move(b).finish();
}

// Part sizes as counted by the indicator variables (column sums).
inline std::vector<std::size_t> indicator_part_sizes(const QuboModel& model, std::span<const std::uint8_t> a) {
  const auto& meta = model.meta();
  if (!meta) throw std::invalid_argument("model has no partition metadata");
  std::vector<std::size_t> sizes(meta->k, 0);
  if (!model.kway_layout()) {
    for (std::size_t v = 0; v < meta->n; ++v) sizes[1] += a[v];
    sizes[0] = meta->n - sizes[1];
    return sizes;
  }
  for (std::size_t v = 0; v < meta->n; ++v) {
    for (std::size_t j = 0; j < meta->k; ++j) sizes[j] += a[v * meta->k + j];
  }
  return sizes;
}

// Sets every slack chain to the residual of its balance constraint. Returns
// false when some residual is outside the chain's range (the indicator part
// sizes are infeasible); such chains are clamped.
inline bool set_slack_residuals(const QuboModel& model, std::span<std::uint8_t> a) {
  if (model.slack_chains().empty()) return true;
  const auto sizes = indicator_part_sizes(model, a);
  const auto roles = model.var_map();
  bool exact = true;
  for (const SlackChain& chain : model.slack_chains()) {
    double range = 0.0;
    for (var_t s : chain.vars) range += roles[s].weight;
    double residual = static_cast<double>(chain.bound) - static_cast<double>(sizes[chain.part]);
    if (residual < 0.0 || residual > range) {
      exact = false;
      residual = std::clamp(residual, 0.0, range);
    }
    // The last weight is the cap; the rest are powers of two.
    const std::size_t last = chain.vars.size() - 1;
    const double cap = roles[chain.vars[last]].weight;
    const double low_span = range - cap;
    a[chain.vars[last]] = residual > low_span;
    if (residual > low_span) residual -= cap;
    auto rest = static_cast<std::uint64_t>(residual);
    for (std::size_t b = 0; b < last; ++b) a[chain.vars[b]] = (rest >> b) & 1U;
  }
  return exact;
}

// Indicator bits for a partition, with slack bits set to the residual.
inline Assignment encode_partition(const QuboModel& model, const Partition& p) {
  const auto& meta = model.meta();
  if (!meta) throw std::invalid_argument("model has no partition metadata");
  if (p.k != meta->k) throw std::invalid_argument("partition k does not match model");
  p.validate(meta->n);
  Assignment a(model.num_vars(), 0);
  for (vertex_t v = 0; v < meta->n; ++v) {
    if (model.kway_layout()) {
      a[model.indicator(v, p.labels[v])] = 1;
    } else if (p.labels[v] == 1) {
      a[v] = 1;
    }
  }
  set_slack_residuals(model, a);
  return a;
}

}  // namespace qubogp
