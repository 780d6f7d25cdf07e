#pragma once

// Text formats.
//
//   edge list   "u<TAB>v[<TAB>w]" per line, 0-based, w defaults to 1. Lines
//               starting with '#' are comments, except "# nodes: N", which
//               fixes the node count (otherwise max index + 1).
//   signal      one decimal value per line.
//   partition   one integer label per line, 1-based unless zero_based.
//
// Blank lines are ignored everywhere. Reals are written with 17 significant
// digits so that a write/read cycle is exact.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cosub/graph.hpp"

namespace cosub::io {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
  if (!out) throw InputError("write failed for '" + path + "'");
}

/// FNV-1a 64-bit digest, lowercase hex.
inline std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> fields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] inline void fail(const std::string& where, std::size_t line, const std::string& what) {
  throw InputError(where + ":" + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(std::string_view tok, const std::string& where, std::size_t line) {
  T value{};
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  if (ec != std::errc() || ptr != end) fail(where, line, "invalid number '" + std::string(tok) + "'");
  return value;
}

/// Calls `row(line_number, content)` for each non-blank line; comments are
/// handed to `comment` when provided.
template <typename Row, typename Comment>
void for_each_line(const std::string& text, Row&& row, Comment&& comment) {
  std::size_t pos = 0;
  std::size_t line = 0;
  while (pos <= text.size()) {
    auto next = text.find('\n', pos);
    if (next == std::string::npos) next = text.size();
    ++line;
    const auto content = trim(std::string_view(text).substr(pos, next - pos));
    if (!content.empty()) {
      if (content.front() == '#')
        comment(line, content);
      else
        row(line, content);
    }
    pos = next + 1;
  }
}

}  // namespace detail

inline WeightedGraph parse_edge_list(const std::string& text, const std::string& where = "<edges>",
                                     std::optional<int> num_nodes = std::nullopt) {
  std::vector<Edge> edges;
  std::optional<int> declared;
  long long max_index = -1;
  detail::for_each_line(
      text,
      [&](std::size_t line, std::string_view content) {
        const auto f = detail::fields(content);
        if (f.size() != 2 && f.size() != 3) detail::fail(where, line, "expected 'u v [w]'");
        const int u = detail::parse_number<int>(f[0], where, line);
        const int v = detail::parse_number<int>(f[1], where, line);
        const double w = f.size() == 3 ? detail::parse_number<double>(f[2], where, line) : 1.0;
        if (u < 0 || v < 0) detail::fail(where, line, "negative node index");
        if (u == v) detail::fail(where, line, "self-loop");
        if (!(w > 0.0) || !std::isfinite(w)) detail::fail(where, line, "weight must be positive and finite");
        max_index = std::max<long long>(max_index, std::max(u, v));
        edges.push_back({u, v, w});
      },
      [&](std::size_t line, std::string_view content) {
        const auto f = detail::fields(content.substr(1));
        if (f.size() == 2 && f[0] == "nodes:") {
          const int n = detail::parse_number<int>(f[1], where, line);
          if (n < 0) detail::fail(where, line, "negative node count");
          declared = n;
        }
      });
  int n = static_cast<int>(max_index + 1);
  if (declared) {
    if (*declared < n) throw InputError(where + ": declared node count is smaller than an edge endpoint");
    n = *declared;
  }
  if (num_nodes) {
    if (*num_nodes < n) throw InputError(where + ": edge endpoint beyond the expected node count");
    n = *num_nodes;
  }
  try {
    return WeightedGraph(n, std::move(edges));
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

inline WeightedGraph read_edge_list(const std::string& path, std::optional<int> num_nodes = std::nullopt) {
  return parse_edge_list(read_file(path), path, num_nodes);
}

inline std::string format_edge_list(const WeightedGraph& g) {
  std::string out = "# nodes: " + std::to_string(g.num_nodes()) + "\n";
  for (const auto& e : g.edges())
    out += std::to_string(e.u) + '\t' + std::to_string(e.v) + '\t' + format_double(e.weight) + '\n';
  return out;
}

inline void write_edge_list(const std::string& path, const WeightedGraph& g) { write_file(path, format_edge_list(g)); }

inline GraphSignal parse_signal(const std::string& text, const std::string& where = "<signal>") {
  std::vector<double> values;
  detail::for_each_line(
      text,
      [&](std::size_t line, std::string_view content) {
        const auto f = detail::fields(content);
        if (f.size() != 1) detail::fail(where, line, "expected one value per line");
        const double v = detail::parse_number<double>(f[0], where, line);
        if (!std::isfinite(v)) detail::fail(where, line, "non-finite value");
        values.push_back(v);
      },
      [](std::size_t, std::string_view) {});
  return Eigen::Map<const GraphSignal>(values.data(), static_cast<Eigen::Index>(values.size()));
}

inline GraphSignal read_signal(const std::string& path) { return parse_signal(read_file(path), path); }

inline std::string format_signal(const Eigen::VectorXd& x) {
  std::string out;
  for (Eigen::Index i = 0; i < x.size(); ++i) out += format_double(x[i]) + '\n';
  return out;
}

inline void write_signal(const std::string& path, const Eigen::VectorXd& x) { write_file(path, format_signal(x)); }

inline SubgraphPartition parse_partition(const std::string& text, bool zero_based = false,
                                         const std::string& where = "<partition>") {
  std::vector<int> labels;
  const int base = zero_based ? 0 : 1;
  detail::for_each_line(
      text,
      [&](std::size_t line, std::string_view content) {
        const auto f = detail::fields(content);
        if (f.size() != 1) detail::fail(where, line, "expected one label per line");
        const int v = detail::parse_number<int>(f[0], where, line);
        if (v < base) detail::fail(where, line, "label below " + std::to_string(base));
        labels.push_back(v - base);
      },
      [](std::size_t, std::string_view) {});
  SubgraphPartition c(labels);
  if (!labels.empty() && *std::max_element(labels.begin(), labels.end()) + 1 != c.num_subgraphs())
    throw InputError(where + ": labels must cover " + std::to_string(base) + ".." +
                     std::to_string(base + c.num_subgraphs() - 1) + " without gaps");
  return c;
}

inline SubgraphPartition read_partition(const std::string& path, bool zero_based = false) {
  return parse_partition(read_file(path), zero_based, path);
}

/// Canonical labels, 1-based.
inline std::string format_partition(const SubgraphPartition& c) {
  std::string out;
  for (int label : c.labels()) out += std::to_string(label + 1) + '\n';
  return out;
}

inline void write_partition(const std::string& path, const SubgraphPartition& c) {
  write_file(path, format_partition(c));
}

}  // namespace cosub::io
