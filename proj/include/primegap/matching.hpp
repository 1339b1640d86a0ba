#pragma once

// Matchings, the degree-preserving (DP) step, and realization resampling.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "primegap/degseq.hpp"
#include "primegap/graph.hpp"
#include "primegap/primes.hpp"
#include "primegap/vizing.hpp"

namespace primegap {

// Pairwise vertex-disjoint edges, kept in lexicographic order.
struct Matching {
  std::vector<Edge> edges;

  std::size_t size() const { return edges.size(); }
  bool operator==(const Matching&) const = default;
};

// True iff every edge is in g and no two edges share a vertex.
inline bool is_matching_in(const SimpleGraph& g, std::span<const Edge> edges) {
  std::vector<Vertex> used;
  used.reserve(2 * edges.size());
  for (const Edge& e : edges) {
    if (!g.has_edge(e.u, e.v)) return false;
    used.push_back(e.u);
    used.push_back(e.v);
  }
  std::sort(used.begin(), used.end());
  return std::adjacent_find(used.begin(), used.end()) == used.end();
}

// Skip index for matching_of_size. key(u) = max(deg u, min deg of a neighbor);
// a vertex whose key is >= delta has no edge inside H and can be skipped.
// A min segment tree answers "first vertex in [a, b] with key < delta".
// The owner calls refresh() for every vertex whose neighborhood changed.
class CandidateIndex {
 public:
  CandidateIndex() = default;
  explicit CandidateIndex(const SimpleGraph& g) { rebuild(g); }

  void rebuild(const SimpleGraph& g) {
    n_ = g.vertex_count();
    size_ = 1;
    while (size_ < n_ + 1) size_ *= 2;
    tree_.assign(2 * size_, kInf);
    for (Vertex v = 1; v <= n_; ++v) tree_[size_ + v] = key(g, v);
    for (std::size_t i = size_ - 1; i >= 1; --i) tree_[i] = std::min(tree_[2 * i], tree_[2 * i + 1]);
  }

  // Also accepts the vertex right after the last one (a freshly added vertex).
  void refresh(const SimpleGraph& g, Vertex v) {
    if (v > n_ + 1 || v > g.vertex_count()) throw InvalidArgument("refresh of unknown vertex");
    if (v == n_ + 1) {
      if (v >= size_) return rebuild(g);
      n_ = v;
    }
    std::size_t i = size_ + v;
    tree_[i] = key(g, v);
    for (i /= 2; i >= 1; i /= 2) tree_[i] = std::min(tree_[2 * i], tree_[2 * i + 1]);
  }

  Vertex vertex_count() const { return n_; }

  // Smallest u in [a, b] with key(u) < delta, or 0.
  Vertex next(Vertex a, Vertex b, std::uint64_t delta) const {
    if (a < 1) a = 1;
    if (b > n_) b = n_;
    if (a > b) return 0;
    return descend(1, 0, size_ - 1, a, b, delta);
  }

 private:
  static constexpr std::uint64_t kInf = ~std::uint64_t{0};

  static std::uint64_t key(const SimpleGraph& g, Vertex v) {
    std::uint64_t low = kInf;
    for (Vertex w : g.neighbors(v)) low = std::min<std::uint64_t>(low, g.degree(w));
    return std::max<std::uint64_t>(g.degree(v), low);
  }

  Vertex descend(std::size_t node, std::size_t lo, std::size_t hi, Vertex a, Vertex b,
                 std::uint64_t delta) const {
    if (hi < a || lo > b || tree_[node] >= delta) return 0;
    if (lo == hi) return static_cast<Vertex>(lo);
    const std::size_t mid = (lo + hi) / 2;
    if (Vertex r = descend(2 * node, lo, mid, a, b, delta)) return r;
    return descend(2 * node + 1, mid + 1, hi, a, b, delta);
  }

  Vertex n_ = 0;
  std::size_t size_ = 1;
  std::vector<std::uint64_t> tree_{kInf, kInf};
};

struct MatchingOptions {
  // Stop inserting edges as soon as some color class holds k edges.
  bool early_stop = false;
  // Edges of H are inserted starting from this vertex label, wrapping around.
  Vertex start = 1;
  // When set, the k edges are sampled from the winning class with this seed
  // instead of taking the lexicographically smallest ones.
  std::optional<std::uint64_t> sample_seed;
  // Optional skip index; must be current for g. Changes speed, not results.
  const CandidateIndex* index = nullptr;
};

// Deletes every vertex of degree >= delta, Vizing-colors what is left with
// delta colors, and returns k edges of the largest color class (ties to the
// smallest color). nullopt when that class has fewer than k edges.
inline std::optional<Matching> matching_of_size(const SimpleGraph& g, std::uint64_t k,
                                                std::uint64_t delta,
                                                const MatchingOptions& options = {}) {
  if (k == 0) throw InvalidArgument("matching size must be >= 1");
  if (delta == 0) throw InvalidArgument("delta must be >= 1");
  const Vertex n = g.vertex_count();
  if (n == 0) return std::nullopt;

  // Max degree of H is below delta, so delta colors suffice; a palette of 1
  // cannot hold an edge anyway.
  VizingColorer colorer(static_cast<std::uint32_t>(std::max<std::uint64_t>(delta, 1)));
  if (delta >= 2) {
    const Vertex start = (options.start >= 1 && options.start <= n) ? options.start : 1;
    const CandidateIndex* index = options.index;
    if (index && index->vertex_count() != n) throw InvalidArgument("candidate index is stale");
    bool done = false;
    for (Vertex i = 0; i < n && !done; ++i) {
      Vertex u = (start - 1 + i) % n + 1;
      if (index) {
        // Jump to the next vertex that can own an edge of H, wrapping once.
        const bool wrapped = u < start;
        Vertex next = index->next(u, wrapped ? start - 1 : n, delta);
        if (!next && !wrapped) {
          next = index->next(1, start - 1, delta);
          if (next) i = n - start + next;
        } else if (next) {
          i += next - u;
        }
        if (!next) break;
        u = next;
      }
      if (g.degree(u) >= delta) continue;
      for (Vertex v : g.neighbors(u)) {
        // Each edge once: from the endpoint visited first in the rotated order.
        const Vertex pos_u = (u + n - start) % n;
        const Vertex pos_v = (v + n - start) % n;
        if (pos_v < pos_u || g.degree(v) >= delta) continue;
        colorer.insert(u, v);
        if (options.early_stop && colorer.class_size(colorer.largest_class()) >= k) {
          done = true;
          break;
        }
      }
    }
  }
  const std::uint32_t best = colorer.largest_class();
  if (colorer.class_size(best) < k) return std::nullopt;

  Matching m;
  m.edges = colorer.color_class(best);
  if (options.sample_seed) {
    std::mt19937_64 rng(*options.sample_seed);
    std::shuffle(m.edges.begin(), m.edges.end(), rng);
    m.edges.resize(k);
    std::sort(m.edges.begin(), m.edges.end());
  } else {
    m.edges.resize(k);
  }
  return m;
}

// Bounded backtracking search for k disjoint edges. Exhaustive unless the
// node budget runs out, in which case nullopt is returned as well.
inline std::optional<Matching> find_matching_exhaustive(const SimpleGraph& g, std::uint64_t k,
                                                        std::uint64_t node_budget = 50'000'000) {
  const auto edges = g.edges();
  std::vector<char> used(static_cast<std::size_t>(g.vertex_count()) + 1, 0);
  std::vector<Edge> chosen;
  std::uint64_t nodes = 0;
  auto search = [&](auto&& self, std::size_t from) -> bool {
    if (chosen.size() == k) return true;
    if (++nodes > node_budget) return false;
    if (edges.size() - from < k - chosen.size()) return false;
    for (std::size_t i = from; i < edges.size(); ++i) {
      const Edge& e = edges[i];
      if (used[e.u] || used[e.v]) continue;
      used[e.u] = used[e.v] = 1;
      chosen.push_back(e);
      if (self(self, i + 1)) return true;
      chosen.pop_back();
      used[e.u] = used[e.v] = 0;
      if (nodes > node_budget) return false;
    }
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  return Matching{chosen};
}

// In-place DP-step: removes the matching, adds vertex n+1 joined to all
// matched endpoints. Throws (graph untouched) if `matching` is not a matching of g.
inline void apply_dp_step(SimpleGraph& g, std::span<const Edge> matching) {
  if (matching.empty()) throw InvalidArgument("DP-step needs a non-empty matching");
  if (!is_matching_in(g, matching)) throw InvalidArgument("DP-step edges are not a matching of G");
  const Vertex w = g.add_vertex();
  for (const Edge& e : matching) {
    g.remove_edge(e.u, e.v);
    g.add_edge(e.u, w);
    g.add_edge(e.v, w);
  }
}

inline SimpleGraph dp_step(const SimpleGraph& g, std::uint64_t d, const Matching& matching) {
  if (d < 2 || d % 2 != 0) throw InvalidArgument("d must be an even integer >= 2");
  if (matching.size() != d / 2)
    throw InvalidArgument("matching has " + std::to_string(matching.size()) +
                          " edges, DP-step with d = " + std::to_string(d) + " needs " +
                          std::to_string(d / 2));
  SimpleGraph out = g;
  apply_dp_step(out, matching.edges);
  return out;
}

// DP-step that obtains its matching through matching_of_size(g, d/2, delta).
// nullopt when no matching was found; g is never modified.
inline std::optional<SimpleGraph> dp_step(const SimpleGraph& g, std::uint64_t d,
                                          std::uint64_t delta) {
  if (d < 2 || d % 2 != 0) throw InvalidArgument("d must be an even integer >= 2");
  auto m = matching_of_size(g, d / 2, delta);
  if (!m) return std::nullopt;
  return dp_step(g, d, *m);
}

// Degree-preserving double edge swaps: {a-b, c-d} -> {a-c, b-d} whenever the
// result stays simple. Deterministic per seed.
inline SimpleGraph double_edge_swap(const SimpleGraph& g, std::uint64_t seed,
                                    std::uint64_t steps) {
  SimpleGraph out = g;
  auto edges = out.edges();
  if (edges.size() < 2) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
  std::bernoulli_distribution flip(0.5);
  for (std::uint64_t s = 0; s < steps; ++s) {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    if (i == j) continue;
    Vertex a = edges[i].u, b = edges[i].v;
    Vertex c = edges[j].u, d = edges[j].v;
    if (flip(rng)) std::swap(c, d);
    if (a == c || a == d || b == c || b == d) continue;
    if (out.has_edge(a, c) || out.has_edge(b, d)) continue;
    out.remove_edge(a, b);
    out.remove_edge(c, d);
    out.add_edge(a, c);
    out.add_edge(b, d);
    edges[i] = Edge(a, c);
    edges[j] = Edge(b, d);
  }
  return out;
}

// Degree multiset of g equals {p_1 - p_0, ..., p_n - p_{n-1}}.
inline bool is_prime_gap_graph(const SimpleGraph& g, const PrimeTable& table) {
  const Vertex n = g.vertex_count();
  auto expected = prime_gaps(table, n).gaps;
  auto got = g.degrees();
  std::sort(expected.begin(), expected.end());
  std::sort(got.begin(), got.end());
  return expected == got;
}

}  // namespace primegap
