#pragma once

// Text formats: degree sequences, edge lists, DOT, JSON graphs.

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "primegap/degseq.hpp"
#include "primegap/error.hpp"
#include "primegap/graph.hpp"

namespace primegap::io {

inline constexpr Vertex kDotMaxVertices = 1000;

namespace detail {

inline std::uint64_t parse_u64(std::string_view tok, std::size_t line) {
  std::uint64_t v = 0;
  const auto* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc{} || p != end)
    throw FormatError("line " + std::to_string(line) + ": not a non-negative integer: '" +
                      std::string(tok) + "'");
  return v;
}

inline std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && !(s[j] == ' ' || s[j] == '\t' || s[j] == ',' || s[j] == '\r')) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

// "3 3 2 2 2" or "3,3,2,2,2". Blank input is the empty sequence.
inline DegreeSequence parse_degree_sequence(std::string_view text) {
  std::vector<std::uint64_t> v;
  for (auto t : detail::tokens(text)) v.push_back(detail::parse_u64(t, 1));
  return DegreeSequence(std::move(v));
}

// One sequence per non-empty line; '#' starts a comment.
inline std::vector<DegreeSequence> read_degree_sequences(std::istream& in) {
  std::vector<DegreeSequence> out;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    auto toks = detail::tokens(line);
    if (toks.empty()) continue;
    std::vector<std::uint64_t> v;
    for (auto t : toks) v.push_back(detail::parse_u64(t, no));
    out.emplace_back(std::move(v));
  }
  return out;
}

inline void write_degree_sequence(std::ostream& os, const DegreeSequence& seq) {
  bool first = true;
  for (auto d : seq) {
    if (!first) os << ' ';
    os << d;
    first = false;
  }
  os << '\n';
}

// "# n N" header, then one "u v" line per edge.
inline void write_edge_list(std::ostream& os, const SimpleGraph& g) {
  os << "# n " << g.vertex_count() << '\n';
  for (const Edge& e : g.edges()) os << e.u << ' ' << e.v << '\n';
}

// Without a header, n is the largest label seen.
inline SimpleGraph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::uint64_t n = 0;
  bool have_n = false;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    std::string_view s = line;
    if (!s.empty() && s.front() == '#') {
      auto toks = detail::tokens(s.substr(1));
      if (toks.size() == 2 && toks[0] == "n") {
        n = detail::parse_u64(toks[1], no);
        have_n = true;
      }
      continue;
    }
    auto toks = detail::tokens(s);
    if (toks.empty()) continue;
    if (toks.size() != 2) throw FormatError("line " + std::to_string(no) + ": expected 'u v'");
    const auto u = detail::parse_u64(toks[0], no);
    const auto v = detail::parse_u64(toks[1], no);
    if (u == 0 || v == 0 || u > UINT32_MAX || v > UINT32_MAX)
      throw FormatError("line " + std::to_string(no) + ": vertex labels are 1-based 32-bit");
    if (u == v) throw FormatError("line " + std::to_string(no) + ": self-loop");
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    if (!have_n) n = std::max<std::uint64_t>(n, std::max(u, v));
  }
  try {
    return SimpleGraph::from_edges(static_cast<Vertex>(n), edges);
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
}

inline void write_dot(std::ostream& os, const SimpleGraph& g) {
  if (g.vertex_count() > kDotMaxVertices)
    throw SizeError("DOT export is limited to " + std::to_string(kDotMaxVertices) + " vertices");
  os << "graph G" << g.vertex_count() << " {\n";
  for (Vertex v = 1; v <= g.vertex_count(); ++v) os << "  " << v << ";\n";
  for (const Edge& e : g.edges()) os << "  " << e.u << " -- " << e.v << ";\n";
  os << "}\n";
}

inline nlohmann::json to_json(const SimpleGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  return {{"n", g.vertex_count()}, {"edges", std::move(edges)}};
}

inline SimpleGraph graph_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<std::uint64_t>();
    if (n > UINT32_MAX) throw FormatError("n too large");
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw FormatError("edge must be [u, v]");
      const auto u = e[0].get<std::uint64_t>();
      const auto v = e[1].get<std::uint64_t>();
      if (u == 0 || v == 0 || u > n || v > n || u == v) throw FormatError("bad edge endpoints");
      edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    return SimpleGraph::from_edges(static_cast<Vertex>(n), edges);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("graph JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("graph JSON: ") + e.what());
  }
}

}  // namespace primegap::io
