#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "primegap/error.hpp"

namespace primegap {

using Vertex = std::uint32_t;

// Undirected edge, always stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Simple graph on labels 1..n with sorted adjacency arrays.
class SimpleGraph {
 public:
  SimpleGraph() = default;
  explicit SimpleGraph(Vertex n) : adj_(static_cast<std::size_t>(n) + 1) {}

  static SimpleGraph from_edges(Vertex n, std::span<const Edge> edges) {
    SimpleGraph g(n);
    for (const Edge& e : edges)
      if (!g.add_edge(e.u, e.v))
        throw InvalidArgument("duplicate edge " + std::to_string(e.u) + "-" + std::to_string(e.v));
    return g;
  }

  Vertex vertex_count() const { return adj_.empty() ? 0 : static_cast<Vertex>(adj_.size() - 1); }
  std::uint64_t edge_count() const { return m_; }

  std::span<const Vertex> neighbors(Vertex v) const {
    check_vertex(v);
    return adj_[v];
  }
  std::size_t degree(Vertex v) const { return neighbors(v).size(); }

  bool has_edge(Vertex a, Vertex b) const {
    if (a == b || a == 0 || b == 0 || a > vertex_count() || b > vertex_count()) return false;
    const auto& small = adj_[a].size() <= adj_[b].size() ? adj_[a] : adj_[b];
    const Vertex other = adj_[a].size() <= adj_[b].size() ? b : a;
    return std::binary_search(small.begin(), small.end(), other);
  }

  // Returns false if the edge already exists. Self-loops are rejected.
  bool add_edge(Vertex a, Vertex b) {
    check_vertex(a);
    check_vertex(b);
    if (a == b) throw InvalidArgument("self-loop at " + std::to_string(a));
    auto& na = adj_[a];
    auto it = std::lower_bound(na.begin(), na.end(), b);
    if (it != na.end() && *it == b) return false;
    na.insert(it, b);
    auto& nb = adj_[b];
    nb.insert(std::lower_bound(nb.begin(), nb.end(), a), a);
    ++m_;
    return true;
  }

  bool remove_edge(Vertex a, Vertex b) {
    if (!has_edge(a, b)) return false;
    auto& na = adj_[a];
    na.erase(std::lower_bound(na.begin(), na.end(), b));
    auto& nb = adj_[b];
    nb.erase(std::lower_bound(nb.begin(), nb.end(), a));
    --m_;
    return true;
  }

  Vertex add_vertex() {
    if (adj_.empty()) adj_.resize(1);
    adj_.emplace_back();
    return vertex_count();
  }

  // degrees()[i] is the degree of vertex i + 1.
  std::vector<std::uint64_t> degrees() const {
    std::vector<std::uint64_t> out;
    out.reserve(vertex_count());
    for (Vertex v = 1; v <= vertex_count(); ++v) out.push_back(adj_[v].size());
    return out;
  }

  std::size_t max_degree() const {
    std::size_t best = 0;
    for (Vertex v = 1; v <= vertex_count(); ++v) best = std::max(best, adj_[v].size());
    return best;
  }

  // All edges in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(m_);
    for (Vertex u = 1; u <= vertex_count(); ++u)
      for (Vertex v : adj_[u])
        if (v > u) out.emplace_back(u, v);
    return out;
  }

  // Throws std::logic_error when a structural invariant is broken.
  void check_invariants() const {
    std::uint64_t half = 0;
    for (Vertex u = 1; u <= vertex_count(); ++u) {
      const auto& nu = adj_[u];
      for (std::size_t i = 0; i < nu.size(); ++i) {
        const Vertex v = nu[i];
        if (v == u) throw std::logic_error("self-loop at " + std::to_string(u));
        if (v == 0 || v > vertex_count()) throw std::logic_error("neighbor label out of range");
        if (i > 0 && nu[i - 1] >= v) throw std::logic_error("adjacency not sorted/unique");
        if (!std::binary_search(adj_[v].begin(), adj_[v].end(), u))
          throw std::logic_error("asymmetric adjacency");
      }
      half += nu.size();
    }
    if (half != 2 * m_) throw std::logic_error("edge count disagrees with degree sum");
  }

  bool operator==(const SimpleGraph& other) const {
    return vertex_count() == other.vertex_count() && m_ == other.m_ && adj_ == other.adj_;
  }

 private:
  void check_vertex(Vertex v) const {
    if (v == 0 || v > vertex_count())
      throw InvalidArgument("vertex " + std::to_string(v) + " out of range 1.." +
                            std::to_string(vertex_count()));
  }

  std::vector<std::vector<Vertex>> adj_;  // adj_[0] unused
  std::uint64_t m_ = 0;
};

}  // namespace primegap
