#pragma once

// Constructive Vizing edge coloring (Misra–Gries fan / Kempe-chain method).
//
// Edges are inserted one at a time; after every insertion the colored edges
// form a proper coloring from a fixed palette, provided the palette has at
// least (max degree + 1) colors. Color classes are therefore matchings at
// every intermediate step, which is what the early-stop matching search uses.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "primegap/graph.hpp"

namespace primegap {

// Proper edge coloring; colors are 1-based.
struct EdgeColoring {
  std::vector<std::pair<Edge, std::uint32_t>> colors;  // sorted by edge
  std::uint32_t palette = 0;                           // colors drawn from 1..palette

  std::uint32_t colors_used() const {
    std::vector<std::uint32_t> cs;
    for (const auto& [e, c] : colors) cs.push_back(c);
    std::sort(cs.begin(), cs.end());
    return static_cast<std::uint32_t>(std::unique(cs.begin(), cs.end()) - cs.begin());
  }
};

class VizingColorer {
 public:
  explicit VizingColorer(std::uint32_t palette) : palette_(palette), class_size_(palette, 0) {
    if (palette == 0) throw InvalidArgument("palette must be non-empty");
  }

  std::uint32_t palette() const { return palette_; }
  std::uint64_t edge_count() const { return edges_; }

  // Inserts and colors edge {a, b}. Recolors along a fan and one Kempe chain.
  void insert(Vertex a, Vertex b) {
    if (a == b) throw InvalidArgument("self-loop");
    const std::uint32_t u = local(a);
    const std::uint32_t v = local(b);
    if (color_between(u, v) != kNone) throw InvalidArgument("edge inserted twice");
    if (degree(u) + 1 >= palette_ || degree(v) + 1 >= palette_)
      throw std::logic_error("palette of " + std::to_string(palette_) +
                             " colors is smaller than max degree + 1");

    // Maximal fan of u starting at v.
    fan_.assign(1, v);
    for (;;) {
      const std::uint32_t last = fan_.back();
      bool extended = false;
      for (std::uint32_t c = 0; c < palette_ && !extended; ++c) {
        const std::uint32_t w = slot(u, c);
        if (w == kNone || !is_free(last, c)) continue;
        if (std::find(fan_.begin(), fan_.end(), w) != fan_.end()) continue;
        fan_.push_back(w);
        extended = true;
      }
      if (!extended) break;
    }

    const std::uint32_t c = first_free(u);
    const std::uint32_t d = first_free(fan_.back());
    if (c != d) invert_path(u, c, d);

    // Longest prefix of the fan that is still a fan, stopping at the first
    // vertex where d is free.
    std::size_t w = fan_.size();
    for (std::size_t i = 0; i < fan_.size(); ++i) {
      if (i > 0) {
        const std::uint32_t ci = color_between(u, fan_[i]);
        if (ci == kNone || !is_free(fan_[i - 1], ci)) break;
      }
      if (is_free(fan_[i], d)) {
        w = i;
        break;
      }
    }
    if (w == fan_.size()) throw std::logic_error("Vizing fan rotation found no target");

    for (std::size_t i = 0; i < w; ++i) {
      const std::uint32_t ci = color_between(u, fan_[i + 1]);
      unset(u, fan_[i + 1], ci);
      set(u, fan_[i], ci);
    }
    set(u, fan_[w], d);
    ++edges_;
  }

  std::uint64_t class_size(std::uint32_t color) const { return class_size_.at(color - 1); }

  // Largest class, ties to the smallest color index. Returns a 1-based color.
  std::uint32_t largest_class() const {
    auto it = std::max_element(class_size_.begin(), class_size_.end());
    return static_cast<std::uint32_t>(it - class_size_.begin()) + 1;
  }

  // Edges of a color class in lexicographic order.
  std::vector<Edge> color_class(std::uint32_t color) const {
    std::vector<Edge> out;
    const std::uint32_t c = color - 1;
    for (std::uint32_t x = 0; x < global_.size(); ++x) {
      const std::uint32_t y = slot(x, c);
      if (y != kNone && global_[x] < global_[y]) out.emplace_back(global_[x], global_[y]);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  EdgeColoring coloring() const {
    EdgeColoring out;
    out.palette = palette_;
    for (std::uint32_t x = 0; x < global_.size(); ++x)
      for (std::uint32_t c = 0; c < palette_; ++c) {
        const std::uint32_t y = slot(x, c);
        if (y != kNone && global_[x] < global_[y])
          out.colors.emplace_back(Edge(global_[x], global_[y]), c + 1);
      }
    std::sort(out.colors.begin(), out.colors.end());
    return out;
  }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  std::uint32_t local(Vertex g) {
    auto [it, inserted] = index_.try_emplace(g, static_cast<std::uint32_t>(global_.size()));
    if (inserted) {
      global_.push_back(g);
      slots_.resize(slots_.size() + palette_, kNone);
      degree_.push_back(0);
    }
    return it->second;
  }

  std::uint32_t& slot(std::uint32_t x, std::uint32_t c) {
    return slots_[static_cast<std::size_t>(x) * palette_ + c];
  }
  std::uint32_t slot(std::uint32_t x, std::uint32_t c) const {
    return slots_[static_cast<std::size_t>(x) * palette_ + c];
  }
  bool is_free(std::uint32_t x, std::uint32_t c) const { return slot(x, c) == kNone; }
  std::uint32_t degree(std::uint32_t x) const { return degree_[x]; }

  std::uint32_t first_free(std::uint32_t x) const {
    for (std::uint32_t c = 0; c < palette_; ++c)
      if (is_free(x, c)) return c;
    throw std::logic_error("no free color");
  }

  std::uint32_t color_between(std::uint32_t x, std::uint32_t y) const {
    for (std::uint32_t c = 0; c < palette_; ++c)
      if (slot(x, c) == y) return c;
    return kNone;
  }

  void set(std::uint32_t x, std::uint32_t y, std::uint32_t c) {
    if (!is_free(x, c) || !is_free(y, c)) throw std::logic_error("color conflict in Vizing step");
    slot(x, c) = y;
    slot(y, c) = x;
    ++class_size_[c];
    ++degree_[x];
    ++degree_[y];
  }

  void unset(std::uint32_t x, std::uint32_t y, std::uint32_t c) {
    slot(x, c) = kNone;
    slot(y, c) = kNone;
    --class_size_[c];
    --degree_[x];
    --degree_[y];
  }

  // Swaps colors c and d along the alternating path leaving u on d (c is free at u).
  void invert_path(std::uint32_t u, std::uint32_t c, std::uint32_t d) {
    path_.clear();
    std::uint32_t x = u;
    std::uint32_t col = d;
    while (slot(x, col) != kNone) {
      const std::uint32_t y = slot(x, col);
      path_.push_back({x, y, col});
      x = y;
      col = (col == d) ? c : d;
    }
    for (const auto& [p, q, k] : path_) unset(p, q, k);
    for (const auto& [p, q, k] : path_) set(p, q, k == d ? c : d);
  }

  struct PathEdge {
    std::uint32_t x, y, color;
  };

  std::uint32_t palette_;
  std::uint64_t edges_ = 0;
  std::vector<std::uint64_t> class_size_;
  std::unordered_map<Vertex, std::uint32_t> index_;
  std::vector<Vertex> global_;
  std::vector<std::uint32_t> slots_;  // slots_[x * palette + c] = neighbor on color c
  std::vector<std::uint32_t> degree_;
  std::vector<std::uint32_t> fan_;
  std::vector<PathEdge> path_;
};

// Colors G with at most Delta + 1 colors; edges inserted in lexicographic order.
inline EdgeColoring vizing_color(const SimpleGraph& g) {
  VizingColorer colorer(static_cast<std::uint32_t>(g.max_degree()) + 1);
  for (const Edge& e : g.edges()) colorer.insert(e.u, e.v);
  return colorer.coloring();
}

// True iff `coloring` covers exactly the edges of g and is proper.
inline bool is_proper_coloring(const SimpleGraph& g, const EdgeColoring& coloring) {
  if (coloring.colors.size() != g.edge_count()) return false;
  std::vector<Edge> listed;
  for (const auto& entry : coloring.colors) listed.push_back(entry.first);
  std::sort(listed.begin(), listed.end());
  if (std::adjacent_find(listed.begin(), listed.end()) != listed.end()) return false;
  std::vector<std::vector<std::uint32_t>> seen(static_cast<std::size_t>(g.vertex_count()) + 1);
  for (const auto& [e, c] : coloring.colors) {
    if (!g.has_edge(e.u, e.v) || c == 0 || c > coloring.palette) return false;
    for (Vertex x : {e.u, e.v}) {
      if (std::find(seen[x].begin(), seen[x].end(), c) != seen[x].end()) return false;
      seen[x].push_back(c);
    }
  }
  return true;
}

}  // namespace primegap
