// bench.hpp - experiment grid, external result ingestion and table output
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "qubogp/annealer.hpp"
#include "qubogp/best_known.hpp"
#include "qubogp/evaluate.hpp"
#include "qubogp/format.hpp"
#include "qubogp/graph_io.hpp"
#include "qubogp/partitioner.hpp"

namespace qubogp {

inline constexpr const char* kAnnealerSolverId = "sa";
inline constexpr const char* kSparsifiedSolverId = "sa+ff";

struct RunRecord {
  std::string graph_id;
  std::size_t n = 0;
  double d_avg = 0.0;
  std::string solver_id;
  std::size_t k = 2;
  double epsilon = 0.0;
  std::optional<double> penalty;
  std::uint64_t seed = 0;
  std::optional<std::size_t> cut_raw;
  std::optional<std::size_t> cut_repaired;
  bool feasible = false;  // raw annealer output met every constraint
  std::optional<double> approximation_ratio;
  double wall_time = 0.0;
  std::string config_digest;
  std::string status = "ok";

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct BenchConfig {
  std::vector<std::string> graphs;
  std::vector<std::size_t> ks{2};
  std::vector<double> epsilons{0.0};
  PartitionRequest request;
  bool sparsify = false;
  SparsifyPipelineParams sparsify_params;
  std::size_t workers = 1;
  std::optional<std::string> best_known_path;
  std::optional<std::string> external_path;

  BenchConfig() { request.anneal.time_limit = 60.0; }
};

// ---------------------------------------------------------------------------
// config

inline const char* to_string(Schedule s) { return s == Schedule::linear ? "linear" : "geometric"; }
inline const char* to_string(InitialState s) { return s == InitialState::balanced ? "balanced" : "random"; }

inline Schedule parse_schedule(const std::string& s) {
  if (s == "geometric") return Schedule::geometric;
  if (s == "linear") return Schedule::linear;
  throw std::invalid_argument("unknown schedule " + s);
}
inline InitialState parse_init(const std::string& s) {
  if (s == "random") return InitialState::random;
  if (s == "balanced") return InitialState::balanced;
  throw std::invalid_argument("unknown initial state " + s);
}
inline PenaltyChoice parse_penalty(const std::string& s) {
  if (s == "auto" || s == "AUTO") return std::nullopt;
  double p = 0.0;
  if (!detail::parse_number(std::string_view(s), p) || !(p > 0.0)) {
    throw std::invalid_argument("penalty must be \"auto\" or a positive number");
  }
  return p;
}

// Relative graph paths are resolved against base_dir.
inline BenchConfig bench_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  BenchConfig c;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return (path.is_relative() && !base_dir.empty() ? base_dir / path : path).string();
  };
  for (const auto& g : j.at("graphs")) c.graphs.push_back(resolve(g.get<std::string>()));
  if (j.contains("ks")) c.ks = j["ks"].get<std::vector<std::size_t>>();
  if (j.contains("epsilons")) c.epsilons = j["epsilons"].get<std::vector<double>>();
  if (j.contains("penalty")) {
    const auto& p = j["penalty"];
    c.request.penalty = p.is_string() ? parse_penalty(p.get<std::string>()) : PenaltyChoice(p.get<double>());
  }
  if (j.contains("max_penalty_retries")) c.request.max_penalty_retries = j["max_penalty_retries"];
  if (j.contains("max_variables")) c.request.max_variables = j["max_variables"];
  if (j.contains("anneal")) {
    const auto& a = j["anneal"];
    AnnealConfig& ac = c.request.anneal;
    if (a.contains("sweeps")) ac.sweeps = a["sweeps"];
    if (a.contains("replicas")) ac.replicas = a["replicas"];
    if (a.contains("seed")) ac.seed = a["seed"];
    if (a.contains("time_limit")) {
      ac.time_limit = a["time_limit"].is_null() ? std::nullopt : std::optional<double>(a["time_limit"].get<double>());
    }
    if (a.contains("temp_initial")) ac.temp_initial = a["temp_initial"].get<double>();
    if (a.contains("temp_final")) ac.temp_final = a["temp_final"];
    if (a.contains("schedule")) ac.schedule = parse_schedule(a["schedule"]);
    if (a.contains("offset_increment")) ac.offset_increment = a["offset_increment"].get<double>();
    if (a.contains("init")) ac.init = parse_init(a["init"]);
    if (a.contains("threads")) ac.threads = a["threads"];
  }
  if (j.contains("sparsify")) {
    const auto& s = j["sparsify"];
    c.sparsify = s.value("enabled", true);
    if (s.contains("keep_ratio")) c.sparsify_params.keep_ratio = s["keep_ratio"];
    if (s.contains("pf")) c.sparsify_params.burn_probability = s["pf"];
    if (s.contains("walks")) c.sparsify_params.walks = s["walks"];
    if (s.contains("repeats")) c.sparsify_params.repeats = s["repeats"];
    if (s.contains("seed")) c.sparsify_params.seed = s["seed"];
  }
  if (j.contains("workers")) c.workers = j["workers"];
  if (j.contains("best_known")) c.best_known_path = resolve(j["best_known"].get<std::string>());
  if (j.contains("external")) c.external_path = resolve(j["external"].get<std::string>());
  return c;
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Canonical text of every parameter that can change a solver's result.
// Thread counts and the grid itself are excluded.
inline std::string solver_signature(const PartitionRequest& r, const std::string& solver_id,
                                    const SparsifyPipelineParams* sp = nullptr) {
  const AnnealConfig& a = r.anneal;
  std::ostringstream s;
  s << "solver=" << solver_id << ";penalty=" << (r.penalty ? format_real(*r.penalty) : "auto")
    << ";retries=" << r.max_penalty_retries << ";sweeps=" << a.sweeps
    << ";t0=" << (a.temp_initial ? format_real(*a.temp_initial) : "auto") << ";tf=" << format_real(a.temp_final)
    << ";schedule=" << to_string(a.schedule) << ";replicas=" << a.replicas << ";seed=" << a.seed
    << ";time_limit=" << (a.time_limit ? format_real(*a.time_limit) : "none")
    << ";offset=" << (a.offset_increment ? format_real(*a.offset_increment) : "auto") << ";init=" << to_string(a.init);
  if (sp) {
    s << ";keep=" << format_real(sp->keep_ratio) << ";pf=" << format_real(sp->burn_probability)
      << ";walks=" << sp->walks << ";repeats=" << sp->repeats << ";ff_seed=" << sp->seed;
  }
  return s.str();
}

inline std::string config_digest(const PartitionRequest& r, const std::string& solver_id,
                                 const SparsifyPipelineParams* sp = nullptr) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(solver_signature(r, solver_id, sp))));
  return buf;
}

// ---------------------------------------------------------------------------
// grid

namespace detail {

inline RunRecord run_cell(const Graph& g, const std::string& solver_id, std::size_t k, double eps,
                          const BenchConfig& cfg, const BestKnownRegistry& registry) {
  RunRecord rec;
  rec.graph_id = g.name();
  rec.n = g.num_vertices();
  rec.d_avg = g.average_degree();
  rec.solver_id = solver_id;
  rec.k = k;
  rec.epsilon = eps;
  rec.seed = cfg.request.anneal.seed;
  const bool sparsified = solver_id == kSparsifiedSolverId;
  rec.config_digest = config_digest(cfg.request, solver_id, sparsified ? &cfg.sparsify_params : nullptr);

  PartitionRequest req = cfg.request;
  req.k = k;
  req.epsilon = eps;
  try {
    if (k < 2 || k > g.num_vertices()) throw ModelTooLargeError("k=" + std::to_string(k) + " not in [2, n]");
    if (sparsified) {
      const SparsifyOutcome so = sparsify_pipeline(g, req, cfg.sparsify_params);
      rec.cut_repaired = so.best_cut;
      rec.feasible = true;
      rec.wall_time = so.wall_time;
    } else {
      const PartitionOutcome po = partition_graph(g, req);
      rec.penalty = po.penalty;
      rec.cut_raw = po.cut_raw;
      rec.cut_repaired = po.cut_repaired;
      rec.feasible = po.raw_feasibility.feasible();
      rec.wall_time = po.wall_time;
    }
  } catch (const ModelTooLargeError& e) {
    rec.status = std::string("skipped: ") + e.what();
    return rec;
  } catch (const InfeasibleError& e) {
    rec.status = std::string("infeasible: ") + e.what();
    return rec;
  }
  if (auto best = registry.lookup(rec.graph_id, k, eps)) {
    rec.approximation_ratio = approximation_ratio(*rec.cut_repaired, *best);
  }
  return rec;
}

}  // namespace detail

// One record per (graph, k, epsilon) and solver, in grid order. Unreadable
// graphs and oversized models produce records with a status and no cuts.
inline std::vector<RunRecord> run_grid(const BenchConfig& cfg, const BestKnownRegistry& registry) {
  struct Cell {
    std::size_t graph;
    std::string solver;
    std::size_t k;
    double eps;
  };
  std::vector<std::optional<Graph>> graphs(cfg.graphs.size());
  std::vector<std::string> load_errors(cfg.graphs.size());
  for (std::size_t i = 0; i < cfg.graphs.size(); ++i) {
    try {
      graphs[i] = load_graph(cfg.graphs[i]);
    } catch (const std::exception& e) {
      load_errors[i] = e.what();
    }
  }

  std::vector<Cell> cells;
  for (std::size_t gi = 0; gi < cfg.graphs.size(); ++gi) {
    for (std::size_t k : cfg.ks) {
      for (double eps : cfg.epsilons) {
        cells.push_back({gi, kAnnealerSolverId, k, eps});
        if (cfg.sparsify) cells.push_back({gi, kSparsifiedSolverId, k, eps});
      }
    }
  }

  std::vector<RunRecord> out(cells.size());
  auto run = [&](std::size_t c) {
    const Cell& cell = cells[c];
    if (!graphs[cell.graph]) {
      RunRecord rec;
      rec.graph_id = graph_id_from_path(cfg.graphs[cell.graph]);
      rec.solver_id = cell.solver;
      rec.k = cell.k;
      rec.epsilon = cell.eps;
      rec.seed = cfg.request.anneal.seed;
      rec.status = "error: " + load_errors[cell.graph];
      out[c] = rec;
      return;
    }
    out[c] = detail::run_cell(*graphs[cell.graph], cell.solver, cell.k, cell.eps, cfg, registry);
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, cells.size()));
  if (workers == 1) {
    for (std::size_t c = 0; c < cells.size(); ++c) run(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < cells.size(); c = next++) run(c);
      });
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV helpers

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

template <typename T>
std::string opt_str(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_floating_point_v<T>) {
    return format_real(*v);
  } else {
    return std::to_string(*v);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// comparison tables

struct ComparisonRow {
  std::string graph_id;
  std::size_t k = 2;
  double epsilon = 0.0;
  std::optional<std::size_t> n;
  std::optional<double> d_avg;
  std::optional<std::size_t> registry_best;             // from the best-known registry
  std::map<std::string, std::optional<std::size_t>> cuts;  // nullopt = missing result
};

// Per (graph, k, epsilon) cuts of several solvers. The reference value for
// ratios is the registry best-known cut, or failing that the best cut any
// solver in the row reached.
class ComparisonTable {
 public:
  std::vector<std::string> solvers;  // column order
  std::vector<ComparisonRow> rows;
  std::vector<std::string> warnings;

  ComparisonRow& row(const std::string& graph_id, std::size_t k, double eps) {
    for (auto& r : rows) {
      if (r.graph_id == graph_id && r.k == k && std::llround(r.epsilon * 1e6) == std::llround(eps * 1e6)) return r;
    }
    rows.push_back({graph_id, k, eps, std::nullopt, std::nullopt, std::nullopt, {}});
    return rows.back();
  }
  const ComparisonRow* find(const std::string& graph_id, std::size_t k, double eps) const {
    for (const auto& r : rows) {
      if (r.graph_id == graph_id && r.k == k && std::llround(r.epsilon * 1e6) == std::llround(eps * 1e6)) return &r;
    }
    return nullptr;
  }

  void add_solver(const std::string& s) {
    if (std::find(solvers.begin(), solvers.end(), s) == solvers.end()) solvers.push_back(s);
  }

  static std::optional<std::size_t> min_cut(const ComparisonRow& r) {
    std::optional<std::size_t> m;
    for (const auto& [s, c] : r.cuts) {
      if (c && (!m || *c < *m)) m = c;
    }
    return m;
  }
  static std::optional<std::size_t> reference(const ComparisonRow& r) {
    return r.registry_best ? r.registry_best : min_cut(r);
  }
  static std::optional<std::size_t> cut(const ComparisonRow& r, const std::string& solver) {
    auto it = r.cuts.find(solver);
    return it == r.cuts.end() ? std::nullopt : it->second;
  }
  static bool is_min(const ComparisonRow& r, const std::string& solver) {
    auto c = cut(r, solver);
    return c && c == min_cut(r);
  }
  static std::optional<double> ratio(const ComparisonRow& r, const std::string& solver) {
    auto c = cut(r, solver);
    auto ref = reference(r);
    if (!c || !ref) return std::nullopt;
    return approximation_ratio(*c, *ref);
  }
  // A cut strictly below the registry value.
  static bool new_best(const ComparisonRow& r, const std::string& solver) {
    auto c = cut(r, solver);
    return c && r.registry_best && *c < *r.registry_best;
  }

  // One block per (k, epsilon), rows in first-seen order; minimum cuts bold.
  std::string render_markdown() const {
    std::vector<std::pair<std::size_t, double>> blocks;
    for (const auto& r : rows) {
      std::pair<std::size_t, double> b{r.k, r.epsilon};
      if (std::find(blocks.begin(), blocks.end(), b) == blocks.end()) blocks.push_back(b);
    }
    std::sort(blocks.begin(), blocks.end());
    std::ostringstream out;
    bool first_block = true;
    for (const auto& [k, eps] : blocks) {
      if (!first_block) out << '\n';
      first_block = false;
      char pct[32];
      std::snprintf(pct, sizeof(pct), "%g", eps * 100.0);
      out << "### k=" << k << ", " << pct << "% imbalance\n\n";
      out << "| graph | \\|V\\| | d_avg | Best known |";
      for (const auto& s : solvers) out << ' ' << s << " |";
      out << "\n|---|---:|---:|---:|";
      for (std::size_t i = 0; i < solvers.size(); ++i) out << "---:|";
      out << '\n';
      for (const auto& r : rows) {
        if (r.k != k || r.epsilon != eps) continue;
        char davg[32] = "-";
        if (r.d_avg) std::snprintf(davg, sizeof(davg), "%.2f", *r.d_avg);
        out << "| " << r.graph_id << " | " << (r.n ? std::to_string(*r.n) : "-") << " | " << davg << " | "
            << (r.registry_best ? std::to_string(*r.registry_best) : "-") << " |";
        for (const auto& s : solvers) {
          auto c = cut(r, s);
          if (!c) {
            out << " - |";
          } else if (is_min(r, s)) {
            out << " **" << *c << "** |";
          } else {
            out << ' ' << *c << " |";
          }
        }
        out << '\n';
      }
    }
    return out.str();
  }

  // Long format: one line per (row, solver) with ratio and flags.
  std::string render_csv() const {
    std::ostringstream out;
    out << "graph_id,k,epsilon,solver_id,cut,reference,approximation_ratio,is_min,new_best\n";
    for (const auto& r : rows) {
      for (const auto& s : solvers) {
        if (r.cuts.find(s) == r.cuts.end()) continue;
        out << detail::csv_escape(r.graph_id) << ',' << r.k << ',' << format_real(r.epsilon) << ','
            << detail::csv_escape(s) << ',' << detail::opt_str(cut(r, s)) << ',' << detail::opt_str(reference(r))
            << ',' << detail::opt_str(ratio(r, s)) << ',' << (is_min(r, s) ? 1 : 0) << ','
            << (new_best(r, s) ? 1 : 0) << '\n';
      }
    }
    return out.str();
  }
};

inline ComparisonTable comparison_from_records(const std::vector<RunRecord>& records,
                                               const BestKnownRegistry& registry) {
  ComparisonTable t;
  for (const auto& rec : records) {
    t.add_solver(rec.solver_id);
    ComparisonRow& row = t.row(rec.graph_id, rec.k, rec.epsilon);
    if (rec.n) row.n = rec.n;
    if (rec.n) row.d_avg = rec.d_avg;
    row.registry_best = registry.lookup(rec.graph_id, rec.k, rec.epsilon);
    row.cuts[rec.solver_id] = rec.cut_repaired;
  }
  return t;
}

// Merges external solver results (CSV columns graph_id, solver_id, k,
// epsilon, cut in any order) with internal records. Duplicate
// (graph, solver, k, epsilon) rows: the last one wins, with a warning. Empty,
// "NA" or negative cuts are recorded as missing.
inline ComparisonTable ingest_external(std::istream& csv, const BestKnownRegistry& registry,
                                       const std::vector<RunRecord>& internal = {}) {
  ComparisonTable t = comparison_from_records(internal, registry);
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> col;
  std::map<std::tuple<std::string, std::string, std::size_t, long long>, std::size_t> seen;
  while (std::getline(csv, line)) {
    ++line_no;
    if (detail::trim(line).empty() || line[0] == '#') continue;
    auto f = detail::parse_csv_line(line);
    for (auto& x : f) x = detail::trim(x);
    if (col.empty()) {
      for (std::size_t i = 0; i < f.size(); ++i) col[f[i]] = i;
      for (const char* need : {"graph_id", "solver_id", "k", "epsilon", "cut"}) {
        if (!col.count(need)) throw ParseError(std::string("missing column ") + need, line_no);
      }
      continue;
    }
    auto field = [&](const char* name) -> const std::string& {
      const std::size_t i = col.at(name);
      if (i >= f.size()) throw ParseError("too few fields", line_no);
      return f[i];
    };
    std::size_t k = 0;
    double eps = 0.0;
    if (!detail::parse_number(std::string_view(field("k")), k) ||
        !detail::parse_number(std::string_view(field("epsilon")), eps)) {
      throw ParseError("bad k or epsilon", line_no);
    }
    const std::string& graph = field("graph_id");
    const std::string& solver = field("solver_id");
    std::optional<std::size_t> cut;
    const std::string& cs = field("cut");
    long long cv = 0;
    if (!cs.empty() && cs != "NA" && cs != "na") {
      if (!detail::parse_number(std::string_view(cs), cv)) throw ParseError("bad cut value", line_no);
      if (cv >= 0) cut = static_cast<std::size_t>(cv);
    }
    auto key = std::make_tuple(graph, solver, k, std::llround(eps * 1e6));
    if (auto it = seen.find(key); it != seen.end()) {
      t.warnings.push_back("line " + std::to_string(line_no) + ": duplicate row for " + graph + "/" + solver +
                           " overrides line " + std::to_string(it->second));
    }
    seen[key] = line_no;

    t.add_solver(solver);
    ComparisonRow& row = t.row(graph, k, eps);
    row.registry_best = registry.lookup(graph, k, eps);
    if (!row.n) {
      if (auto info = registry.info(graph)) {
        row.n = info->n;
        row.d_avg = info->d_avg;
      }
    }
    row.cuts[solver] = cut;
  }
  return t;
}

inline ComparisonTable ingest_external(const std::string& csv_path, const BestKnownRegistry& registry,
                                       const std::vector<RunRecord>& internal = {}) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open " + csv_path);
  return ingest_external(in, registry, internal);
}

// ---------------------------------------------------------------------------
// record output

enum class EmitFormat { csv, json, markdown };

inline EmitFormat parse_emit_format(const std::string& s) {
  if (s == "csv") return EmitFormat::csv;
  if (s == "json") return EmitFormat::json;
  if (s == "markdown" || s == "md") return EmitFormat::markdown;
  throw std::invalid_argument("unknown format " + s);
}

inline const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols = {
      "graph_id", "n",          "d_avg",    "solver_id",          "k",         "epsilon",       "penalty", "seed",
      "cut_raw",  "cut_repaired", "feasible", "approximation_ratio", "wall_time", "config_digest", "status"};
  return cols;
}

inline std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  const auto& cols = record_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : records) {
    out << detail::csv_escape(r.graph_id) << ',' << r.n << ',' << format_real(r.d_avg) << ','
        << detail::csv_escape(r.solver_id) << ',' << r.k << ',' << format_real(r.epsilon) << ','
        << detail::opt_str(r.penalty) << ',' << r.seed << ',' << detail::opt_str(r.cut_raw) << ','
        << detail::opt_str(r.cut_repaired) << ',' << (r.feasible ? "true" : "false") << ','
        << detail::opt_str(r.approximation_ratio) << ',' << format_real(r.wall_time) << ',' << r.config_digest << ','
        << detail::csv_escape(r.status) << '\n';
  }
  return out.str();
}

inline nlohmann::json record_to_json(const RunRecord& r) {
  auto opt = [](const auto& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"graph_id", r.graph_id},
          {"n", r.n},
          {"d_avg", r.d_avg},
          {"solver_id", r.solver_id},
          {"k", r.k},
          {"epsilon", r.epsilon},
          {"penalty", opt(r.penalty)},
          {"seed", r.seed},
          {"cut_raw", opt(r.cut_raw)},
          {"cut_repaired", opt(r.cut_repaired)},
          {"feasible", r.feasible},
          {"approximation_ratio", opt(r.approximation_ratio)},
          {"wall_time", r.wall_time},
          {"config_digest", r.config_digest},
          {"status", r.status}};
}

inline RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  auto get_opt = [&](const char* key, auto& dst) {
    using T = typename std::decay_t<decltype(dst)>::value_type;
    if (j.contains(key) && !j[key].is_null()) dst = j[key].get<T>();
  };
  r.graph_id = j.at("graph_id");
  r.n = j.at("n");
  r.d_avg = j.at("d_avg");
  r.solver_id = j.at("solver_id");
  r.k = j.at("k");
  r.epsilon = j.at("epsilon");
  get_opt("penalty", r.penalty);
  r.seed = j.at("seed");
  get_opt("cut_raw", r.cut_raw);
  get_opt("cut_repaired", r.cut_repaired);
  r.feasible = j.at("feasible");
  get_opt("approximation_ratio", r.approximation_ratio);
  r.wall_time = j.at("wall_time");
  r.config_digest = j.at("config_digest");
  r.status = j.at("status");
  return r;
}

inline std::vector<RunRecord> records_from_json(const nlohmann::json& j) {
  std::vector<RunRecord> out;
  for (const auto& e : j) out.push_back(record_from_json(e));
  return out;
}

inline std::string emit(const std::vector<RunRecord>& records, EmitFormat format,
                        const BestKnownRegistry& registry = BestKnownRegistry::builtin()) {
  switch (format) {
    case EmitFormat::csv:
      return records_to_csv(records);
    case EmitFormat::json: {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& r : records) j.push_back(record_to_json(r));
      return j.dump(2) + "\n";
    }
    case EmitFormat::markdown:
      if (records.empty()) throw std::invalid_argument("markdown output needs at least one record");
      return comparison_from_records(records, registry).render_markdown();
  }
  throw std::invalid_argument("unknown format");
}

inline nlohmann::json solve_result_to_json(const SolveResult& r) {
  std::string bits(r.best_bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = r.best_bits[i] ? '1' : '0';
  nlohmann::json j = {{"bits", bits},           {"energy", r.best_energy},   {"sweeps", r.sweeps_done},
                      {"flips", r.flips},        {"wall_time", r.wall_time}, {"seed", r.seed},
                      {"replica", r.replica_id}};
  if (!r.energy_trace.empty()) j["energy_trace"] = r.energy_trace;
  return j;
}

}  // namespace qubogp
