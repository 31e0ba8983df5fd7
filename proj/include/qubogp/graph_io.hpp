// graph_io.hpp - METIS/CHACO and Matrix Market readers and writers
#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qubogp/graph.hpp"

namespace qubogp {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

}  // namespace detail

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// CHACO/METIS adjacency format: header "n m [fmt [ncon]]", then one line per
// vertex listing 1-indexed neighbours. Lines starting with '%' are comments.
// Weights (fmt != 0) are read and discarded.
inline Graph parse_metis(std::string_view text, std::vector<std::string>* warnings = nullptr) {
  const auto lines = detail::split_lines(text);
  std::size_t li = 0;
  auto is_comment = [](std::string_view l) {
    auto p = l.find_first_not_of(" \t\r");
    return p != std::string_view::npos && l[p] == '%';
  };
  auto is_blank = [](std::string_view l) { return l.find_first_not_of(" \t\r") == std::string_view::npos; };
  while (li < lines.size() && (is_comment(lines[li]) || is_blank(lines[li]))) ++li;
  if (li == lines.size()) throw ParseError("missing header", 0);

  const auto header = detail::split_ws(lines[li]);
  const std::size_t header_line = li + 1;
  std::size_t n = 0;
  std::size_t m = 0;
  if (header.size() < 2 || header.size() > 4 || !detail::parse_number(header[0], n) ||
      !detail::parse_number(header[1], m)) {
    throw ParseError("malformed header, expected \"n m [fmt [ncon]]\"", header_line);
  }
  bool vertex_sizes = false;
  bool vertex_weights = false;
  bool edge_weights = false;
  std::size_t ncon = 1;
  if (header.size() >= 3) {
    std::string_view fmt = header[2];
    if (fmt.size() > 3 || fmt.find_first_not_of("01") != std::string_view::npos) {
      throw ParseError("malformed format code", header_line);
    }
    std::string padded = std::string(3 - fmt.size(), '0') + std::string(fmt);
    vertex_sizes = padded[0] == '1';
    vertex_weights = padded[1] == '1';
    edge_weights = padded[2] == '1';
  }
  if (header.size() == 4 && !detail::parse_number(header[3], ncon)) {
    throw ParseError("malformed constraint count", header_line);
  }
  if ((vertex_sizes || vertex_weights || edge_weights) && warnings) {
    warnings->push_back("weighted METIS input: weights discarded");
  }
  ++li;

  std::vector<Edge> edges;
  edges.reserve(2 * m);
  std::size_t v = 0;
  for (; li < lines.size() && v < n; ++li) {
    if (is_comment(lines[li])) continue;
    const auto toks = detail::split_ws(lines[li]);
    std::size_t t = 0;
    if (vertex_sizes) ++t;
    if (vertex_weights) t += ncon;
    if (t > toks.size()) throw ParseError("missing vertex weights", li + 1);
    const std::size_t stride = edge_weights ? 2 : 1;
    if ((toks.size() - t) % stride != 0) throw ParseError("dangling edge weight", li + 1);
    for (; t < toks.size(); t += stride) {
      std::size_t u = 0;
      if (!detail::parse_number(toks[t], u)) throw ParseError("bad neighbour index", li + 1);
      if (u < 1 || u > n) throw ParseError("neighbour index out of range [1,n]", li + 1);
      if (u - 1 == v) throw ParseError("self-loop on vertex " + std::to_string(v + 1), li + 1);
      edges.push_back({static_cast<vertex_t>(v), static_cast<vertex_t>(u - 1)});
    }
    ++v;
  }
  if (v < n) throw ParseError("expected " + std::to_string(n) + " vertex lines, found " + std::to_string(v), 0);
  for (; li < lines.size(); ++li) {
    if (!is_comment(lines[li]) && !is_blank(lines[li])) {
      throw ParseError("unexpected content after vertex lines", li + 1);
    }
  }

  // Each edge must be listed from both endpoints.
  std::vector<Edge> directed = edges;
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());
  for (const Edge& e : directed) {
    if (!std::binary_search(directed.begin(), directed.end(), Edge{e.v, e.u})) {
      throw ParseError("asymmetric adjacency: " + std::to_string(e.u + 1) + " lists " +
                           std::to_string(e.v + 1) + " but not vice versa",
                       0);
    }
  }
  Graph g = Graph::from_edges(n, edges);
  if (g.num_edges() != m) {
    throw ParseError("header declares " + std::to_string(m) + " edges, adjacency lists " +
                         std::to_string(g.num_edges()),
                     header_line);
  }
  return g;
}

inline std::string write_metis(const Graph& g) {
  std::ostringstream out;
  if (!g.name().empty()) out << "% " << g.name() << '\n';
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (vertex_t v = 0; v < g.num_vertices(); ++v) {
    bool first = true;
    for (vertex_t u : g.neighbors(v)) {
      if (!first) out << ' ';
      out << u + 1;
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

// Matrix Market coordinate format. The off-diagonal nonzero pattern becomes
// the edge set; values are ignored, diagonal entries dropped, and entries are
// symmetrised regardless of the symmetry tag.
inline Graph parse_matrix_market(std::string_view text, std::vector<std::string>* warnings = nullptr) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError("empty input", 0);
  const auto banner = detail::split_ws(lines[0]);
  auto lower = [](std::string_view s) {
    std::string r(s);
    for (auto& c : r) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return r;
  };
  if (banner.size() < 5 || banner[0] != "%%MatrixMarket" || lower(banner[1]) != "matrix" ||
      lower(banner[2]) != "coordinate") {
    throw ParseError("expected \"%%MatrixMarket matrix coordinate <field> <symmetry>\" banner", 1);
  }
  const std::string field = lower(banner[3]);
  const std::string symmetry = lower(banner[4]);
  std::size_t values_per_entry = 0;
  if (field == "pattern") {
    values_per_entry = 0;
  } else if (field == "real" || field == "integer" || field == "double") {
    values_per_entry = 1;
  } else if (field == "complex") {
    values_per_entry = 2;
  } else {
    throw ParseError("unsupported field type " + field, 1);
  }
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric" &&
      symmetry != "hermitian") {
    throw ParseError("unsupported symmetry " + symmetry, 1);
  }
  if (values_per_entry > 0 && warnings) warnings->push_back("Matrix Market values ignored");

  std::size_t li = 1;
  auto skip = [&](std::string_view l) {
    auto p = l.find_first_not_of(" \t\r");
    return p == std::string_view::npos || l[p] == '%';
  };
  while (li < lines.size() && skip(lines[li])) ++li;
  if (li == lines.size()) throw ParseError("missing size line", 0);
  const auto size = detail::split_ws(lines[li]);
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (size.size() != 3 || !detail::parse_number(size[0], rows) || !detail::parse_number(size[1], cols) ||
      !detail::parse_number(size[2], nnz)) {
    throw ParseError("malformed size line, expected \"rows cols nnz\"", li + 1);
  }
  if (rows != cols) throw ParseError("matrix is not square", li + 1);
  ++li;

  std::vector<Edge> edges;
  edges.reserve(nnz);
  std::size_t seen = 0;
  std::size_t diagonal = 0;
  for (; li < lines.size(); ++li) {
    if (skip(lines[li])) continue;
    const auto toks = detail::split_ws(lines[li]);
    std::size_t r = 0, c = 0;
    if (toks.size() != 2 + values_per_entry || !detail::parse_number(toks[0], r) ||
        !detail::parse_number(toks[1], c)) {
      throw ParseError("unparseable entry", li + 1);
    }
    for (std::size_t t = 2; t < toks.size(); ++t) {
      double value = 0.0;
      if (!detail::parse_number(toks[t], value)) throw ParseError("unparseable value", li + 1);
    }
    if (r < 1 || r > rows || c < 1 || c > cols) throw ParseError("index out of bounds", li + 1);
    ++seen;
    if (r == c) {
      ++diagonal;
      continue;
    }
    edges.push_back({static_cast<vertex_t>(r - 1), static_cast<vertex_t>(c - 1)});
  }
  if (seen != nnz) {
    throw ParseError("size line declares " + std::to_string(nnz) + " entries, found " + std::to_string(seen), 0);
  }
  if (diagonal > 0 && warnings) {
    warnings->push_back(std::to_string(diagonal) + " diagonal entries dropped");
  }
  return Graph::from_edges(rows, edges);
}

inline std::string write_matrix_market(const Graph& g) {
  std::ostringstream out;
  out << "%%MatrixMarket matrix coordinate pattern symmetric\n";
  if (!g.name().empty()) out << "% " << g.name() << '\n';
  out << g.num_vertices() << ' ' << g.num_vertices() << ' ' << g.num_edges() << '\n';
  // Lower triangle, as symmetric Matrix Market files store it.
  for (const Edge& e : g.edges()) out << e.v + 1 << ' ' << e.u + 1 << '\n';
  return out.str();
}

enum class GraphFormat { metis, matrix_market };

inline GraphFormat guess_graph_format(const std::string& path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  return ends_with(".mtx") || ends_with(".mm") ? GraphFormat::matrix_market : GraphFormat::metis;
}

inline std::string graph_id_from_path(const std::string& path) {
  auto slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = base.find_last_of('.');
  return dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
}

inline Graph load_graph(const std::string& path, std::vector<std::string>* warnings = nullptr) {
  const std::string text = read_file(path);
  Graph g = guess_graph_format(path) == GraphFormat::matrix_market ? parse_matrix_market(text, warnings)
                                                                   : parse_metis(text, warnings);
  g.set_name(graph_id_from_path(path));
  return g;
}

}  // namespace qubogp
