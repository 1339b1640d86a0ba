#pragma once

// Brute-force ground truth for small instances. Obviously correct, not fast.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "primegap/degseq.hpp"
#include "primegap/error.hpp"
#include "primegap/graph.hpp"

namespace primegap::oracle {

inline constexpr std::size_t kMaxVertices = 8;
inline constexpr std::size_t kMaxEdges = 16;

struct RealizationSet {
  DegreeSequence degrees;
  std::vector<SimpleGraph> graphs;
};

namespace detail {

// Walks the edges of K_n in lexicographic order, choosing each edge in or out.
// After the last edge of row a (the pairs (a, b), b > a) vertex a can gain no
// more edges, so its residual degree must be zero there.
template <class Visit>
void backtrack(const DegreeSequence& seq, Visit&& visit, bool stop_at_first) {
  const std::size_t n = seq.size();
  if (n > kMaxVertices)
    throw SizeError("oracle supports at most " + std::to_string(kMaxVertices) + " vertices");
  std::vector<std::int64_t> residual(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (seq[i] >= n) return;  // cannot exceed n - 1 neighbors
    residual[i] = static_cast<std::int64_t>(seq[i]);
  }
  std::vector<Edge> all;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) all.emplace_back(a + 1, b + 1);

  std::vector<Edge> chosen;
  bool stop = false;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (stop) return;
    if (i == all.size()) {
      for (auto r : residual)
        if (r != 0) return;
      visit(chosen);
      if (stop_at_first) stop = true;
      return;
    }
    const Edge e = all[i];
    const std::size_t a = e.u - 1, b = e.v - 1;
    const bool row_ends = (b == n - 1);
    if (residual[a] > 0 && residual[b] > 0) {
      --residual[a];
      --residual[b];
      chosen.push_back(e);
      if (!row_ends || residual[a] == 0) self(self, i + 1);
      chosen.pop_back();
      ++residual[a];
      ++residual[b];
    }
    if (!row_ends || residual[a] == 0) self(self, i + 1);
  };
  if (n == 0) {
    visit(chosen);
    return;
  }
  if (n == 1) {
    if (residual[0] == 0) visit(chosen);
    return;
  }
  rec(rec, 0);
}

}  // namespace detail

inline bool is_graphic_bruteforce(const DegreeSequence& seq) {
  bool found = false;
  detail::backtrack(seq, [&](const std::vector<Edge>&) { found = true; }, true);
  return found;
}

inline RealizationSet enumerate_realizations(const DegreeSequence& seq) {
  RealizationSet out{seq, {}};
  const auto n = static_cast<Vertex>(seq.size());
  detail::backtrack(
      seq, [&](const std::vector<Edge>& edges) { out.graphs.push_back(SimpleGraph::from_edges(n, edges)); },
      false);
  return out;
}

// Exact maximum matching size by subset search.
inline std::size_t max_matching_bruteforce(const SimpleGraph& g) {
  const auto edges = g.edges();
  if (edges.size() > kMaxEdges)
    throw SizeError("oracle supports at most " + std::to_string(kMaxEdges) + " edges");
  // Compact labels so the vertex bitmask fits 32 bits (at most 2 * 16 endpoints).
  std::vector<Vertex> labels;
  for (const Edge& e : edges) {
    labels.push_back(e.u);
    labels.push_back(e.v);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  std::vector<std::uint32_t> bits_of;
  for (const Edge& e : edges) {
    const auto iu = std::lower_bound(labels.begin(), labels.end(), e.u) - labels.begin();
    const auto iv = std::lower_bound(labels.begin(), labels.end(), e.v) - labels.begin();
    bits_of.push_back((1u << iu) | (1u << iv));
  }
  std::size_t best = 0;
  const std::uint32_t subsets = 1u << edges.size();
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size <= best) continue;
    std::uint32_t seen = 0;
    bool ok = true;
    for (std::size_t i = 0; i < edges.size() && ok; ++i) {
      if (!(mask >> i & 1u)) continue;
      ok = (seen & bits_of[i]) == 0;
      seen |= bits_of[i];
    }
    if (ok) best = size;
  }
  return best;
}

}  // namespace primegap::oracle
