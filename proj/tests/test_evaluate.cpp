#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "qubogp/evaluate.hpp"
#include "qubogp/partitioner.hpp"

using namespace qubogp;

TEST(Decode, Bipartition) {
  const QuboModel m = build_bipartition_qubo(oracle::corpus_graph("p4"), 0.0);
  const Decoded d = decode(m, Assignment{1, 0, 1, 0});
  EXPECT_EQ(d.partition.labels, (std::vector<std::uint32_t>{1, 0, 1, 0}));
  EXPECT_EQ(d.feasibility.part_sizes, (std::vector<std::size_t>{2, 2}));
  EXPECT_TRUE(d.feasibility.feasible());
}

TEST(Decode, OneHotViolationTakesLowestPart) {
  const QuboModel m = build_kway_qubo(oracle::corpus_graph("k3"), 3, 0.0);
  Assignment a(m.num_vars(), 0);
  a[m.indicator(0, 0)] = 1;
  a[m.indicator(0, 2)] = 1;
  a[m.indicator(1, 1)] = 1;
  a[m.indicator(2, 2)] = 1;
  const Decoded d = decode(m, a);
  EXPECT_FALSE(d.feasibility.one_hot_ok);
  EXPECT_EQ(d.partition.labels[0], 0u);
  EXPECT_FALSE(d.feasibility.feasible());
}

TEST(Decode, BalanceViolation) {
  const QuboModel m = build_bipartition_qubo(oracle::corpus_graph("star4"), 0.0);
  const Decoded d = decode(m, Assignment{1, 1, 1, 1, 0});
  EXPECT_TRUE(d.feasibility.one_hot_ok);
  EXPECT_FALSE(d.feasibility.balance_ok);
}

TEST(Decode, LengthMismatch) {
  const QuboModel m = build_bipartition_qubo(oracle::corpus_graph("p4"), 0.0);
  EXPECT_THROW(decode(m, Assignment{1, 0}), std::invalid_argument);
}

TEST(Repair, FeasibleUnchanged) {
  const Graph g = oracle::corpus_graph("p4");
  const Partition p{{0, 1, 0, 1}, 2};
  EXPECT_EQ(repair(g, p, 2, 0.0), p);
}

TEST(Repair, SingleEdge) {
  const Graph g = oracle::corpus_graph("k2");
  const Partition r = repair(g, {{0, 0}, 2}, 2, 0.0);
  EXPECT_EQ(cut_edges(g, r), 1u);
  EXPECT_TRUE(is_balanced(r, 2, 0.0));
}

TEST(Repair, StarMovesLeavesBeforeCenter) {
  // Part 1 must reach ceil(5/2) = 3: two leaves (cost +1 each), then the
  // center whose cost has dropped to 0.
  const Graph g = oracle::corpus_graph("star4");
  const Partition r = repair(g, {{0, 0, 0, 0, 0}, 2}, 2, 0.0);
  EXPECT_EQ(r.labels, (std::vector<std::uint32_t>{1, 1, 1, 0, 0}));
  EXPECT_EQ(cut_edges(g, r), 2u);
  EXPECT_EQ(r.part_sizes()[1], 3u);
}

TEST(Repair, Infeasible) {
  const Graph g = oracle::corpus_graph("k2");
  EXPECT_THROW(repair(g, {{0, 1}, 3}, 3, 0.0), InfeasibleError);
}

TEST(Repair, AlwaysBalancedAndIdempotent) {
  std::mt19937_64 gen(1);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Graph g = oracle::random_graph(15 + seed % 10, 0.3, seed);
    const std::size_t n = g.num_vertices();
    for (std::uint32_t k : {2u, 3u, 4u}) {
      for (double eps : {0.0, 0.03, 0.2}) {
        Partition p{std::vector<std::uint32_t>(n), k};
        // skewed start: most vertices in part 0
        for (auto& l : p.labels) l = gen() % 4 == 0 ? static_cast<std::uint32_t>(gen() % k) : 0;
        const Partition r = repair(g, p, k, eps);
        EXPECT_TRUE(is_balanced(r, n, eps));
        EXPECT_EQ(repair(g, r, k, eps), r);
        std::size_t moved = 0;
        for (std::size_t v = 0; v < n; ++v) moved += p.labels[v] != r.labels[v];
        // moves only what the size violation forces
        std::size_t excess = 0;
        const auto sizes = p.part_sizes();
        const auto bounds = part_bounds(n, k, eps);
        for (std::size_t j = 0; j < k; ++j) {
          if (sizes[j] > bounds[j].upper) excess += sizes[j] - bounds[j].upper;
          if (sizes[j] < bounds[j].lower) excess += bounds[j].lower - sizes[j];
        }
        EXPECT_LE(moved, std::min(n, excess));
      }
    }
  }
}

TEST(Ratio, Examples) {
  EXPECT_EQ(approximation_ratio(596, 596), 1.0);
  EXPECT_NEAR(*approximation_ratio(613, 596), 1.0285, 1e-4);
  EXPECT_EQ(approximation_ratio(19, 19), 1.0);
  EXPECT_EQ(approximation_ratio(0, 0), 1.0);
  EXPECT_FALSE(approximation_ratio(3, 0).has_value());
}

TEST(PartitionFile, RoundTrip) {
  const Partition p{{0, 2, 1, 1, 0}, 3};
  const PartitionFile f = parse_partition(write_partition(p, "demo", 0.03));
  EXPECT_EQ(f.partition, p);
  EXPECT_EQ(f.graph_id, "demo");
  EXPECT_EQ(f.epsilon, 0.03);
  EXPECT_THROW(parse_partition("0\n1 2\n"), ParseError);
  EXPECT_THROW(parse_partition("0\n3\n", 2), ParseError);
}

TEST(Partitioner, FeasibleResultAndRecordedAttempts) {
  const Graph g = oracle::corpus_graph("grid8x8");
  PartitionRequest req;
  req.anneal.sweeps = 20000;
  req.anneal.replicas = 2;
  const PartitionOutcome o = partition_graph(g, req);
  EXPECT_TRUE(is_balanced(o.repaired, 64, 0.0));
  EXPECT_EQ(o.cut_repaired, cut_edges(g, o.repaired));
  EXPECT_GE(o.attempts, 1u);
  EXPECT_LE(o.attempts, 3u);
  EXPECT_GE(o.penalty, default_penalty(g));
  EXPECT_GE(o.cut_repaired, 8u);  // minimum bisection of the 8x8 grid
  EXPECT_LE(o.cut_repaired, 16u);
}

TEST(Partitioner, FixedPenaltySingleAttempt) {
  const Graph g = oracle::corpus_graph("petersen");
  PartitionRequest req;
  req.k = 3;
  req.penalty = 0.01;  // far too small: the raw output will usually violate constraints
  req.anneal.sweeps = 2000;
  const PartitionOutcome o = partition_graph(g, req);
  EXPECT_EQ(o.attempts, 1u);
  EXPECT_EQ(o.penalty, 0.01);
  EXPECT_TRUE(is_balanced(o.repaired, 10, 0.0));
}

TEST(Partitioner, VariableCap) {
  const Graph g = oracle::corpus_graph("grid8x8");
  PartitionRequest req;
  req.k = 3;
  req.max_variables = 100;
  EXPECT_THROW(partition_graph(g, req), ModelTooLargeError);
  EXPECT_EQ(estimate_num_vars(64, 3, 0.0), build_kway_qubo(g, 3, 0.0).num_vars());
  EXPECT_EQ(estimate_num_vars(64, 2, 0.05), build_bipartition_qubo(g, 0.05).num_vars());
  EXPECT_EQ(estimate_num_vars(64, 4, 0.2), build_kway_qubo(g, 4, 0.2).num_vars());
}

TEST(SparsifyPipeline, DeterministicAndProjectedCutDominates) {
  const Graph g = oracle::corpus_graph("rgg60");
  PartitionRequest req;
  req.anneal.sweeps = 3000;
  SparsifyPipelineParams sp;
  sp.repeats = 4;
  sp.seed = 17;
  const SparsifyOutcome a = sparsify_pipeline(g, req, sp);
  const SparsifyOutcome b = sparsify_pipeline(g, req, sp);
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.best_cut, b.best_cut);
  ASSERT_EQ(a.repeats.size(), 4u);
  for (const auto& r : a.repeats) {
    EXPECT_EQ(r.kept_edges, kept_edge_count(g.num_edges(), 0.7));
    EXPECT_GE(r.projected_cut, r.sparse_cut);
    EXPECT_GE(r.projected_cut, a.best_cut);
  }
  EXPECT_EQ(cut_edges(g, a.best), a.best_cut);
  EXPECT_TRUE(is_balanced(a.best, 60, 0.0));
}
