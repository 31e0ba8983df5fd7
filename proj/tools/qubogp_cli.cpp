// qubogp_cli - balanced graph partitioning through QUBO + simulated annealing
//
// Exit codes: 0 success, 1 other error, 2 parse error (input files or
// arguments), 3 infeasible after repair.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qubogp/annealer.hpp"
#include "qubogp/bench.hpp"
#include "qubogp/best_known.hpp"
#include "qubogp/evaluate.hpp"
#include "qubogp/graph_io.hpp"
#include "qubogp/partitioner.hpp"
#include "qubogp/qubo_io.hpp"

using namespace qubogp;
using nlohmann::json;

namespace {

constexpr int kExitOther = 1;
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;

CLI::Validator penalty_check() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        try {
          parse_penalty(s);
        } catch (const std::invalid_argument& e) {
          return e.what();
        }
        return {};
      },
      "PENALTY");
}

struct SolverFlags {
  std::string graph;
  std::size_t k = 2;
  double epsilon = 0.0;
  std::string penalty = "auto";
  std::uint64_t seed = 0;
  std::size_t replicas = 1;
  std::size_t sweeps = 10000;
  double time_limit = 60.0;
  std::optional<double> temp_initial;
  double temp_final = 0.1;
  std::string schedule = "geometric";
  std::string init = "random";
  std::size_t threads = 0;
  std::size_t max_variables = 0;
  std::string format = "text";
  std::string output;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f, bool with_k) {
  cmd->add_option("--graph", f.graph, "graph file (METIS, or Matrix Market by .mtx/.mm)")->required();
  if (with_k) cmd->add_option("--k", f.k, "number of parts")->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon", f.epsilon, "imbalance, e.g. 0.03")->check(CLI::NonNegativeNumber);
  cmd->add_option("--penalty", f.penalty, "\"auto\" or a positive number")->check(penalty_check());
  cmd->add_option("--seed", f.seed);
  cmd->add_option("--replicas", f.replicas)->check(CLI::PositiveNumber);
  cmd->add_option("--sweeps", f.sweeps)->check(CLI::PositiveNumber);
  cmd->add_option("--time-limit", f.time_limit, "seconds per run")->check(CLI::PositiveNumber);
  cmd->add_option("--t0", f.temp_initial, "initial temperature (default: largest initial |delta|)");
  cmd->add_option("--tf", f.temp_final, "final temperature");
  cmd->add_option("--schedule", f.schedule)->check(CLI::IsMember({"geometric", "linear"}));
  cmd->add_option("--init", f.init)->check(CLI::IsMember({"random", "balanced"}));
  cmd->add_option("--threads", f.threads, "0 = all cores");
  cmd->add_option("--max-variables", f.max_variables, "refuse models larger than this (0 = no cap)");
  cmd->add_option("--format", f.format)->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("-o,--output", f.output, "write the partition to this file");
}

PartitionRequest make_request(const SolverFlags& f) {
  PartitionRequest r;
  r.k = f.k;
  r.epsilon = f.epsilon;
  r.penalty = parse_penalty(f.penalty);
  r.max_variables = f.max_variables;
  r.anneal.sweeps = f.sweeps;
  r.anneal.replicas = f.replicas;
  r.anneal.seed = f.seed;
  r.anneal.time_limit = f.time_limit;
  r.anneal.temp_initial = f.temp_initial;
  r.anneal.temp_final = f.temp_final;
  r.anneal.schedule = parse_schedule(f.schedule);
  r.anneal.init = parse_init(f.init);
  r.anneal.threads = f.threads;
  return r;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

Graph load_with_warnings(const std::string& path) {
  std::vector<std::string> warnings;
  Graph g = load_graph(path, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  return g;
}

void print_summary(const json& j, const std::string& format) {
  if (format == "json") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  for (const auto& [key, value] : j.items()) {
    std::cout << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
}

int run_partition(const SolverFlags& f) {
  const Graph g = load_with_warnings(f.graph);
  const PartitionOutcome o = partition_graph(g, make_request(f));
  const auto best = BestKnownRegistry::builtin().lookup(g.name(), f.k, f.epsilon);
  json j = {{"graph_id", g.name()},
            {"n", g.num_vertices()},
            {"m", g.num_edges()},
            {"k", f.k},
            {"epsilon", f.epsilon},
            {"penalty", o.penalty},
            {"attempts", o.attempts},
            {"variables", o.num_vars},
            {"best_energy", o.best_energy},
            {"raw_feasible", o.raw_feasibility.feasible()},
            {"cut_raw", o.cut_raw},
            {"cut_repaired", o.cut_repaired},
            {"part_sizes", o.repaired.part_sizes()},
            {"wall_time", o.wall_time}};
  if (best) {
    j["best_known"] = *best;
    if (auto r = approximation_ratio(o.cut_repaired, *best)) j["approximation_ratio"] = *r;
  }
  print_summary(j, f.format);
  if (!f.output.empty()) write_text_file(f.output, write_partition(o.repaired, g.name(), f.epsilon));
  return 0;
}

struct PipelineFlags {
  double keep_ratio = 0.7;
  double pf = 0.7;
  std::size_t walks = 10;
  std::size_t repeats = 10;
  std::optional<std::uint64_t> fire_seed;
};

int run_sparsify_pipeline(const SolverFlags& f, const PipelineFlags& pf) {
  const Graph g = load_with_warnings(f.graph);
  SparsifyPipelineParams sp{pf.keep_ratio, pf.pf, pf.walks, pf.repeats, pf.fire_seed.value_or(f.seed)};
  const SparsifyOutcome o = sparsify_pipeline(g, make_request(f), sp);
  json repeats = json::array();
  for (const auto& r : o.repeats) {
    repeats.push_back({{"kept_edges", r.kept_edges}, {"sparse_cut", r.sparse_cut}, {"projected_cut", r.projected_cut}});
  }
  json j = {{"graph_id", g.name()},
            {"n", g.num_vertices()},
            {"m", g.num_edges()},
            {"k", f.k},
            {"epsilon", f.epsilon},
            {"keep_ratio", pf.keep_ratio},
            {"best_repeat", o.best_repeat},
            {"cut", o.best_cut},
            {"part_sizes", o.best.part_sizes()},
            {"repeats", repeats},
            {"wall_time", o.wall_time}};
  if (auto best = BestKnownRegistry::builtin().lookup(g.name(), f.k, f.epsilon)) {
    j["best_known"] = *best;
    if (auto r = approximation_ratio(o.best_cut, *best)) j["approximation_ratio"] = *r;
  }
  print_summary(j, f.format);
  if (!f.output.empty()) write_text_file(f.output, write_partition(o.best, g.name(), f.epsilon));
  return 0;
}

struct BenchFlags {
  std::string config;
  std::vector<std::string> graphs;
  std::vector<std::size_t> ks;
  std::vector<double> epsilons;
  std::optional<std::string> penalty;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicas;
  std::optional<std::size_t> sweeps;
  std::optional<double> time_limit;
  std::optional<std::size_t> workers;
  std::optional<std::string> external;
  std::optional<std::string> best_known;
  std::string format = "csv";
  std::string output;
};

int run_bench(const BenchFlags& f) {
  BenchConfig cfg;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw std::runtime_error("cannot open " + f.config);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ParseError(f.config + ": " + e.what(), 0);
    }
    cfg = bench_config_from_json(j, std::filesystem::path(f.config).parent_path());
  }
  // flags override the file
  if (!f.graphs.empty()) cfg.graphs = f.graphs;
  if (!f.ks.empty()) cfg.ks = f.ks;
  if (!f.epsilons.empty()) cfg.epsilons = f.epsilons;
  if (f.penalty) cfg.request.penalty = parse_penalty(*f.penalty);
  if (f.seed) cfg.request.anneal.seed = *f.seed;
  if (f.replicas) cfg.request.anneal.replicas = *f.replicas;
  if (f.sweeps) cfg.request.anneal.sweeps = *f.sweeps;
  if (f.time_limit) cfg.request.anneal.time_limit = *f.time_limit;
  if (f.workers) cfg.workers = *f.workers;
  if (f.external) cfg.external_path = f.external;
  if (f.best_known) cfg.best_known_path = f.best_known;
  if (cfg.graphs.empty()) throw std::invalid_argument("no graphs given (config \"graphs\" or --graph)");

  BestKnownRegistry registry = BestKnownRegistry::builtin();
  if (cfg.best_known_path) {
    std::ifstream in(*cfg.best_known_path);
    if (!in) throw std::runtime_error("cannot open " + *cfg.best_known_path);
    registry.load_csv(in);
  }
  const auto records = run_grid(cfg, registry);

  std::string text;
  if (cfg.external_path) {
    const ComparisonTable table = ingest_external(*cfg.external_path, registry, records);
    for (const auto& w : table.warnings) std::cerr << "warning: " << w << '\n';
    text = f.format == "markdown" ? table.render_markdown() : table.render_csv();
  } else {
    text = emit(records, parse_emit_format(f.format), registry);
  }
  if (f.output.empty()) {
    std::cout << text;
  } else {
    write_text_file(f.output, text);
  }
  return 0;
}

int run_evaluate(const std::string& graph_path, const std::string& partition_path, std::optional<std::uint32_t> k,
                 std::optional<double> epsilon, const std::string& format) {
  const Graph g = load_with_warnings(graph_path);
  const PartitionFile pf = parse_partition(read_file(partition_path), k);
  pf.partition.validate(g.num_vertices());
  const double eps = epsilon.value_or(pf.epsilon.value_or(0.0));
  const std::size_t cut = cut_edges(g, pf.partition);
  json j = {{"graph_id", g.name()},
            {"k", pf.partition.k},
            {"epsilon", eps},
            {"cut", cut},
            {"part_sizes", pf.partition.part_sizes()},
            {"balanced", is_balanced(pf.partition, g.num_vertices(), eps)}};
  if (auto best = BestKnownRegistry::builtin().lookup(g.name(), pf.partition.k, eps)) {
    j["best_known"] = *best;
    if (auto r = approximation_ratio(cut, *best)) j["approximation_ratio"] = *r;
  }
  print_summary(j, format);
  return 0;
}

enum class FileKind { metis, matrix_market, qubo };

FileKind kind_of(const std::string& path) {
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".qubo") return FileKind::qubo;
  if (ext == ".mtx" || ext == ".mm") return FileKind::matrix_market;
  return FileKind::metis;
}

int run_convert(const std::string& in, const std::string& out, std::size_t k, double epsilon,
                const std::string& penalty) {
  const FileKind from = kind_of(in);
  const FileKind to = kind_of(out);
  if (from == FileKind::qubo) {
    if (to != FileKind::qubo) throw std::invalid_argument("a QUBO file cannot be converted back to a graph");
    write_text_file(out, write_qubo_text(parse_qubo_text(read_file(in))));
    return 0;
  }
  const Graph g = load_with_warnings(in);
  std::string text;
  switch (to) {
    case FileKind::metis:
      text = write_metis(g);
      break;
    case FileKind::matrix_market:
      text = write_matrix_market(g);
      break;
    case FileKind::qubo:
      text = write_qubo_text(build_partition_qubo(g, k, epsilon, parse_penalty(penalty)));
      break;
  }
  write_text_file(out, text);
  return 0;
}

int run_anneal(const std::string& qubo_path, const SolverFlags& f, std::size_t trace_interval) {
  const QuboModel m = parse_qubo_text(read_file(qubo_path));
  AnnealConfig cfg = make_request(f).anneal;
  cfg.trace_interval = trace_interval;
  const SolveResult r = solve(m, cfg);
  json j = solve_result_to_json(r);
  if (m.meta()) {
    const Decoded d = decode(m, r.best_bits);
    j["feasible"] = d.feasibility.feasible();
    j["part_sizes"] = d.feasibility.part_sizes;
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balanced graph partitioning via QUBO and simulated annealing"};
  app.require_subcommand(1);

  SolverFlags part_flags;
  auto* partition = app.add_subcommand("partition", "bisect a graph (k = 2)");
  add_solver_flags(partition, part_flags, false);

  SolverFlags kway_flags;
  kway_flags.k = 3;
  auto* kway = app.add_subcommand("kway", "partition a graph into k parts");
  add_solver_flags(kway, kway_flags, true);

  SolverFlags pipe_flags;
  PipelineFlags pipe;
  auto* pipeline = app.add_subcommand("sparsify-pipeline", "Forest Fire sparsification, partition, project back");
  add_solver_flags(pipeline, pipe_flags, true);
  pipeline->add_option("--keep-ratio", pipe.keep_ratio, "fraction of edges kept")->check(CLI::Range(0.0, 1.0));
  pipeline->add_option("--pf", pipe.pf, "burn probability")->check(CLI::Range(0.0, 1.0));
  pipeline->add_option("--walks", pipe.walks, "burn processes per repeat")->check(CLI::PositiveNumber);
  pipeline->add_option("--repeats", pipe.repeats)->check(CLI::PositiveNumber);
  pipeline->add_option("--fire-seed", pipe.fire_seed, "Forest Fire seed (default: --seed)");

  BenchFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "run a graph x k x epsilon grid");
  bench->add_option("--config", bench_flags.config, "JSON experiment file");
  bench->add_option("--graph", bench_flags.graphs, "graph files (override the config)");
  bench->add_option("--k", bench_flags.ks);
  bench->add_option("--epsilon", bench_flags.epsilons);
  bench->add_option("--penalty", bench_flags.penalty)->check(penalty_check());
  bench->add_option("--seed", bench_flags.seed);
  bench->add_option("--replicas", bench_flags.replicas);
  bench->add_option("--sweeps", bench_flags.sweeps);
  bench->add_option("--time-limit", bench_flags.time_limit);
  bench->add_option("--workers", bench_flags.workers);
  bench->add_option("--external", bench_flags.external, "CSV of external solver results to merge");
  bench->add_option("--best-known", bench_flags.best_known, "CSV extending the best-known registry");
  bench->add_option("--format", bench_flags.format)->check(CLI::IsMember({"csv", "json", "markdown"}));
  bench->add_option("-o,--output", bench_flags.output);

  std::string eval_graph, eval_partition, eval_format = "text";
  std::optional<std::uint32_t> eval_k;
  std::optional<double> eval_eps;
  auto* evaluate = app.add_subcommand("evaluate", "cut and balance of a partition file");
  evaluate->add_option("--graph", eval_graph)->required();
  evaluate->add_option("--partition", eval_partition)->required();
  evaluate->add_option("--k", eval_k);
  evaluate->add_option("--epsilon", eval_eps);
  evaluate->add_option("--format", eval_format)->check(CLI::IsMember({"text", "json"}));

  std::string conv_in, conv_out, conv_penalty = "auto";
  std::size_t conv_k = 2;
  double conv_eps = 0.0;
  auto* convert = app.add_subcommand("convert", "METIS <-> Matrix Market, graph -> QUBO text (.qubo)");
  convert->add_option("input", conv_in)->required();
  convert->add_option("output", conv_out)->required();
  convert->add_option("--k", conv_k, "parts, for QUBO output");
  convert->add_option("--epsilon", conv_eps, "imbalance, for QUBO output");
  convert->add_option("--penalty", conv_penalty, "for QUBO output")->check(penalty_check());

  SolverFlags anneal_flags;
  std::string qubo_path;
  std::size_t trace = 0;
  auto* anneal = app.add_subcommand("anneal", "anneal a QUBO text file, print the best state as JSON");
  anneal->add_option("qubo", qubo_path)->required();
  anneal->add_option("--seed", anneal_flags.seed);
  anneal->add_option("--replicas", anneal_flags.replicas)->check(CLI::PositiveNumber);
  anneal->add_option("--sweeps", anneal_flags.sweeps)->check(CLI::PositiveNumber);
  anneal->add_option("--time-limit", anneal_flags.time_limit)->check(CLI::PositiveNumber);
  anneal->add_option("--t0", anneal_flags.temp_initial);
  anneal->add_option("--tf", anneal_flags.temp_final);
  anneal->add_option("--schedule", anneal_flags.schedule)->check(CLI::IsMember({"geometric", "linear"}));
  anneal->add_option("--init", anneal_flags.init)->check(CLI::IsMember({"random", "balanced"}));
  anneal->add_option("--threads", anneal_flags.threads);
  anneal->add_option("--trace", trace, "record the energy every N sweeps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (*partition) return run_partition(part_flags);
    if (*kway) return run_partition(kway_flags);
    if (*pipeline) return run_sparsify_pipeline(pipe_flags, pipe);
    if (*bench) return run_bench(bench_flags);
    if (*evaluate) return run_evaluate(eval_graph, eval_partition, eval_k, eval_eps, eval_format);
    if (*convert) return run_convert(conv_in, conv_out, conv_k, conv_eps, conv_penalty);
    if (*anneal) return run_anneal(qubo_path, anneal_flags, trace);
  } catch (const ParseError& e) {
    std::cerr << "parse error";
    if (e.line()) std::cerr << " (line " << e.line() << ")";
    std::cerr << ": " << e.what() << '\n';
    return kExitParse;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
  return kExitOther;
}
