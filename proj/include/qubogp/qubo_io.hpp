// qubo_io.hpp - plain-text QUBO files
//
//   c offset <constant>
//   c penalty <P>
//   c meta k <k> epsilon <eps> n <n> layout <bipartition|kway>
//   c var <index> indicator <vertex> <part>
//   c var <index> slack <part> <chain> <weight>
//   c chain <id> part <part> bound <bound>
//   p qubo <num_vars> <num_terms>
//   <i> <j> <coeff>          (0-based, i <= j; i == j is a linear term)
//
// Only the "c offset" line and the terms are needed to define the objective;
// the other comment lines carry the partition metadata used for decoding.
#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qubogp/format.hpp"
#include "qubogp/graph_io.hpp"
#include "qubogp/qubo.hpp"

namespace qubogp {

inline std::string write_qubo_text(const QuboModel& model) {
  std::ostringstream out;
  const auto lin = model.linear();
  std::size_t num_terms = model.quadratic().size();
  for (double c : lin) num_terms += c != 0.0;

  out << "c offset " << format_real(model.constant()) << '\n';
  if (model.penalty() > 0.0) out << "c penalty " << format_real(model.penalty()) << '\n';
  if (const auto& meta = model.meta()) {
    out << "c meta k " << meta->k << " epsilon " << format_real(meta->epsilon) << " n " << meta->n << " layout "
        << (model.kway_layout() ? "kway" : "bipartition") << '\n';
    const auto roles = model.var_map();
    for (std::size_t v = 0; v < roles.size(); ++v) {
      const VarRole& r = roles[v];
      if (r.kind == VarKind::indicator) {
        out << "c var " << v << " indicator " << r.vertex << ' ' << r.part << '\n';
      } else {
        out << "c var " << v << " slack " << r.part << ' ' << r.chain << ' ' << format_real(r.weight) << '\n';
      }
    }
    const auto chains = model.slack_chains();
    for (std::size_t c = 0; c < chains.size(); ++c) {
      out << "c chain " << c << " part " << chains[c].part << " bound " << chains[c].bound << '\n';
    }
  }
  out << "p qubo " << model.num_vars() << ' ' << num_terms << '\n';
  for (std::size_t i = 0; i < lin.size(); ++i) {
    if (lin[i] != 0.0) out << i << ' ' << i << ' ' << format_real(lin[i]) << '\n';
  }
  for (const QuadTerm& t : model.quadratic()) out << t.i << ' ' << t.j << ' ' << format_real(t.coeff) << '\n';
  return out.str();
}

inline QuboModel parse_qubo_text(std::string_view text) {
  const auto lines = detail::split_lines(text);
  bool have_header = false;
  std::size_t num_vars = 0;
  std::size_t declared_terms = 0;
  std::size_t seen_terms = 0;
  double offset = 0.0;
  double penalty = 0.0;
  std::optional<PartitionMeta> meta;
  bool kway = false;
  std::vector<std::pair<std::size_t, VarRole>> roles;
  std::vector<std::pair<std::size_t, SlackChain>> chains;
  QuboBuilder b;

  auto need = [](bool ok, const char* what, std::size_t line) {
    if (!ok) throw ParseError(what, line);
  };

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto toks = detail::split_ws(lines[li]);
    const std::size_t line = li + 1;
    if (toks.empty()) continue;
    if (toks[0] == "c" || toks[0][0] == 'c') {
      if (toks.size() < 2) continue;
      if (toks[1] == "offset") {
        need(toks.size() == 3 && detail::parse_number(toks[2], offset), "malformed offset line", line);
      } else if (toks[1] == "penalty") {
        need(toks.size() == 3 && detail::parse_number(toks[2], penalty), "malformed penalty line", line);
      } else if (toks[1] == "meta") {
        PartitionMeta m;
        need(toks.size() == 10 && toks[2] == "k" && detail::parse_number(toks[3], m.k) && toks[4] == "epsilon" &&
                 detail::parse_number(toks[5], m.epsilon) && toks[6] == "n" && detail::parse_number(toks[7], m.n) &&
                 toks[8] == "layout" && (toks[9] == "kway" || toks[9] == "bipartition"),
             "malformed meta line", line);
        meta = m;
        kway = toks[9] == "kway";
      } else if (toks[1] == "var") {
        std::size_t idx = 0;
        VarRole r;
        need(toks.size() >= 5 && detail::parse_number(toks[2], idx), "malformed var line", line);
        if (toks[3] == "indicator") {
          need(toks.size() == 6 && detail::parse_number(toks[4], r.vertex) && detail::parse_number(toks[5], r.part),
               "malformed indicator line", line);
        } else {
          r.kind = VarKind::slack;
          need(toks[3] == "slack" && toks.size() == 7 && detail::parse_number(toks[4], r.part) &&
                   detail::parse_number(toks[5], r.chain) && detail::parse_number(toks[6], r.weight),
               "malformed slack line", line);
        }
        roles.emplace_back(idx, r);
      } else if (toks[1] == "chain") {
        std::size_t id = 0;
        SlackChain c;
        need(toks.size() == 7 && detail::parse_number(toks[2], id) && toks[3] == "part" &&
                 detail::parse_number(toks[4], c.part) && toks[5] == "bound" && detail::parse_number(toks[6], c.bound),
             "malformed chain line", line);
        chains.emplace_back(id, c);
      }
      continue;
    }
    if (toks[0] == "p") {
      need(!have_header, "duplicate problem line", line);
      need(toks.size() == 4 && toks[1] == "qubo" && detail::parse_number(toks[2], num_vars) &&
               detail::parse_number(toks[3], declared_terms),
           "malformed problem line, expected \"p qubo <num_vars> <num_terms>\"", line);
      have_header = true;
      b = QuboBuilder(num_vars);
      continue;
    }
    need(have_header, "term before problem line", line);
    std::size_t i = 0, j = 0;
    double c = 0.0;
    need(toks.size() == 3 && detail::parse_number(toks[0], i) && detail::parse_number(toks[1], j) &&
             detail::parse_number(toks[2], c),
         "malformed term, expected \"i j coeff\"", line);
    need(i < num_vars && j < num_vars, "term index out of range", line);
    b.add_quadratic(static_cast<var_t>(i), static_cast<var_t>(j), c);
    ++seen_terms;
  }
  need(have_header, "missing problem line", 0);
  need(seen_terms == declared_terms, "term count does not match problem line", 0);

  b.add_constant(offset);
  b.set_penalty(penalty);
  if (meta) {
    need(roles.size() == num_vars, "var map does not cover every variable", 0);
    for (const auto& [idx, r] : roles) {
      need(idx < num_vars, "var index out of range", 0);
      b.set_role(static_cast<var_t>(idx), r);
    }
    std::sort(chains.begin(), chains.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t c = 0; c < chains.size(); ++c) {
      need(chains[c].first == c, "chain ids must be 0..count-1", 0);
    }
    for (auto& [id, chain] : chains) {
      for (const auto& [idx, r] : roles) {
        if (r.kind == VarKind::slack && r.chain == id) chain.vars.push_back(static_cast<var_t>(idx));
      }
      std::sort(chain.vars.begin(), chain.vars.end());
      b.add_chain(std::move(chain));
    }
    b.set_meta(*meta, kway);
  }
  return std::move(b).finish();
}

}  // namespace qubogp
