// best_known.hpp - published best-known cuts used as ratio denominators
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "qubogp/graph_io.hpp"

namespace qubogp {

struct GraphInfo {
  std::size_t n = 0;
  double d_avg = 0.0;
};

class BestKnownRegistry {
 public:
  // Walshaw archive graphs, k = 2, imbalance 0/1/3/5 %.
  static BestKnownRegistry builtin() {
    struct Row {
      const char* id;
      std::size_t n;
      double d_avg;
      std::size_t best[4];
    };
    static constexpr Row kWalshaw[] = {
        {"add20", 2395, 3.12, {596, 585, 560, 536}},
        {"data", 2851, 5.29, {189, 188, 185, 181}},
        {"3elt", 4720, 2.91, {90, 89, 87, 87}},
        {"uk", 4824, 1.42, {19, 19, 18, 18}},
        {"add32", 4960, 1.91, {11, 10, 10, 10}},
        {"bcsstk33", 8738, 33.37, {10171, 10097, 10064, 9914}},
        {"whitaker3", 9800, 2.96, {127, 126, 126, 126}},
        {"crack", 10240, 2.97, {184, 183, 182, 182}},
        {"wing_nodal", 10937, 6.90, {1707, 1695, 1678, 1668}},
        {"fe_4elt2", 11143, 2.95, {130, 130, 130, 130}},
        {"vibrobox", 12328, 13.40, {10343, 10310, 10310, 10310}},
        {"bcsstk29", 13992, 21.64, {2843, 2818, 2818, 2818}},
        {"4elt", 15606, 2.94, {139, 138, 137, 137}},
        {"fe_sphere", 16386, 3.00, {386, 386, 384, 384}},
        {"cti", 16840, 2.86, {334, 318, 318, 318}},
        {"memplus", 17758, 3.05, {5499, 5452, 5352, 5253}},
    };
    static constexpr double kEpsilons[4] = {0.0, 0.01, 0.03, 0.05};
    BestKnownRegistry r;
    for (const Row& row : kWalshaw) {
      r.set_info(row.id, {row.n, row.d_avg});
      for (std::size_t e = 0; e < 4; ++e) r.set(row.id, 2, kEpsilons[e], row.best[e]);
    }
    return r;
  }

  void set(const std::string& graph_id, std::size_t k, double epsilon, std::size_t cut) {
    cuts_[key(graph_id, k, epsilon)] = cut;
  }
  std::optional<std::size_t> lookup(const std::string& graph_id, std::size_t k, double epsilon) const {
    auto it = cuts_.find(key(graph_id, k, epsilon));
    if (it == cuts_.end()) return std::nullopt;
    return it->second;
  }

  void set_info(const std::string& graph_id, GraphInfo info) { info_[graph_id] = info; }
  std::optional<GraphInfo> info(const std::string& graph_id) const {
    auto it = info_.find(graph_id);
    if (it == info_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return cuts_.size(); }

  // CSV with header "graph_id,k,epsilon,best_known"; later rows override.
  void load_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      if (header) {
        header = false;
        if (line.rfind("graph_id", 0) == 0) continue;
      }
      std::vector<std::string> f;
      std::size_t start = 0;
      while (true) {
        auto comma = line.find(',', start);
        f.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      std::size_t k = 0, cut = 0;
      double eps = 0.0;
      if (f.size() != 4 || !detail::parse_number(std::string_view(f[1]), k) ||
          !detail::parse_number(std::string_view(f[2]), eps) || !detail::parse_number(std::string_view(f[3]), cut)) {
        throw ParseError("expected graph_id,k,epsilon,best_known", line_no);
      }
      set(f[0], k, eps, cut);
    }
  }

 private:
  using Key = std::tuple<std::string, std::size_t, std::int64_t>;
  static Key key(const std::string& g, std::size_t k, double eps) { return {g, k, std::llround(eps * 1e6)}; }

  std::map<Key, std::size_t> cuts_;
  std::map<std::string, GraphInfo> info_;
};

}  // namespace qubogp
