// partitioner.hpp - graph -> QUBO -> annealer -> feasible partition
#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qubogp/annealer.hpp"
#include "qubogp/evaluate.hpp"
#include "qubogp/graph.hpp"
#include "qubogp/qubo.hpp"
#include "qubogp/sparsify.hpp"

namespace qubogp {

class ModelTooLargeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PartitionRequest {
  std::size_t k = 2;
  double epsilon = 0.0;
  PenaltyChoice penalty;  // nullopt = AUTO
  AnnealConfig anneal;
  std::size_t max_penalty_retries = 2;  // AUTO only
  std::size_t max_variables = 0;        // 0 = no cap
};

struct PartitionOutcome {
  Partition raw;
  Feasibility raw_feasibility;
  Partition repaired;
  std::size_t cut_raw = 0;
  std::size_t cut_repaired = 0;
  double penalty = 0.0;
  std::size_t attempts = 0;
  std::size_t num_vars = 0;
  double best_energy = 0.0;
  double wall_time = 0.0;
};

inline std::size_t estimate_num_vars(std::size_t n, std::size_t k, double epsilon) {
  const std::size_t indicators = k == 2 ? n : n * k;
  std::size_t slack = 0;
  if (k == 2) {
    const BalanceBounds b = balance_bounds(n, 2, epsilon);
    slack = encode_slack_weights(b.upper - b.lower).size();
  } else {
    for (const auto& b : part_bounds(n, k, epsilon)) slack += encode_slack_weights(b.upper - b.lower).size();
  }
  return indicators + slack;
}

inline QuboModel build_partition_qubo(const Graph& g, std::size_t k, double epsilon, PenaltyChoice penalty) {
  return k == 2 ? build_bipartition_qubo(g, epsilon, penalty) : build_kway_qubo(g, k, epsilon, penalty);
}

// With AUTO penalty an infeasible raw result triggers a re-solve with P
// doubled, up to max_penalty_retries times; the attempt with the smallest
// repaired cut wins.
inline PartitionOutcome partition_graph(const Graph& g, const PartitionRequest& req) {
  const auto start = std::chrono::steady_clock::now();
  if (req.k < 2) throw std::invalid_argument("k must be at least 2");
  if (req.k > g.num_vertices()) throw std::invalid_argument("k exceeds the number of vertices");
  if (req.max_variables) {
    const std::size_t vars = estimate_num_vars(g.num_vertices(), req.k, req.epsilon);
    if (vars > req.max_variables) {
      throw ModelTooLargeError("model needs " + std::to_string(vars) + " variables, cap is " +
                               std::to_string(req.max_variables));
    }
  }

  std::optional<PartitionOutcome> best;
  double p = req.penalty ? *req.penalty : default_penalty(g);
  const std::size_t max_attempts = req.penalty ? 1 : 1 + req.max_penalty_retries;
  std::size_t attempts = 0;
  while (attempts < max_attempts) {
    AnnealConfig cfg = req.anneal;
    if (cfg.time_limit) {
      // retries share the single per-run budget
      const double used = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (attempts > 0 && used >= *cfg.time_limit) break;
      cfg.time_limit = std::max(*cfg.time_limit - used, 1e-3);
    }
    ++attempts;
    const QuboModel model = build_partition_qubo(g, req.k, req.epsilon, p);
    const SolveResult sr = solve(model, cfg);
    Decoded d = decode(model, sr.best_bits);

    PartitionOutcome o;
    o.raw = d.partition;
    o.raw_feasibility = d.feasibility;
    o.cut_raw = cut_edges(g, o.raw);
    o.repaired = repair(g, o.raw, req.k, req.epsilon);
    o.cut_repaired = cut_edges(g, o.repaired);
    o.penalty = p;
    o.num_vars = model.num_vars();
    o.best_energy = sr.best_energy;
    const bool feasible = d.feasibility.feasible();
    if (!best || o.cut_repaired < best->cut_repaired) best = std::move(o);
    if (feasible) break;
    p *= 2.0;
  }
  best->attempts = attempts;
  best->wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return *best;
}

struct SparsifyPipelineParams {
  double keep_ratio = 0.7;
  double burn_probability = 0.7;
  std::size_t walks = 10;
  std::size_t repeats = 10;
  std::uint64_t seed = 0;
};

struct SparsifyRepeat {
  std::size_t kept_edges = 0;
  std::size_t sparse_cut = 0;
  std::size_t projected_cut = 0;
};

struct SparsifyOutcome {
  Partition best;
  std::size_t best_cut = 0;
  std::size_t best_repeat = 0;
  std::vector<SparsifyRepeat> repeats;
  double wall_time = 0.0;
};

// Sparsify, partition the sparse graph, project back, repeated; keeps the
// best projected cut. Repeat r draws its fire from derive_seed(seed, r) and
// its annealer seed from derive_seed(anneal.seed, r).
inline SparsifyOutcome sparsify_pipeline(const Graph& g, const PartitionRequest& req, const SparsifyPipelineParams& sp) {
  if (sp.repeats < 1) throw std::invalid_argument("repeats must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  SparsifyOutcome out;
  for (std::size_t r = 0; r < sp.repeats; ++r) {
    const EdgeScores scores = forest_fire_scores(g, {sp.burn_probability, sp.walks, derive_seed(sp.seed, r)});
    const Graph sparse = sparsify(g, scores, sp.keep_ratio);
    PartitionRequest sub = req;
    sub.anneal.seed = derive_seed(req.anneal.seed, r);
    const PartitionOutcome po = partition_graph(sparse, sub);
    SparsifyRepeat rep{sparse.num_edges(), po.cut_repaired, project_partition(g, po.repaired)};
    if (out.repeats.empty() || rep.projected_cut < out.best_cut) {
      out.best = po.repaired;
      out.best_cut = rep.projected_cut;
      out.best_repeat = r;
    }
    out.repeats.push_back(rep);
  }
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace qubogp
