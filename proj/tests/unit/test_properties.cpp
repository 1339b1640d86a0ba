// Randomized cross-checks between the fast algorithms and the brute-force oracle.
// The exhaustive versions of these live in the acceptance binary.

#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace primegap;

namespace {

DegreeSequence random_sequence(std::mt19937_64& rng, std::size_t max_n, std::uint64_t max_d) {
  const std::size_t n = rng() % (max_n + 1);
  std::vector<std::uint64_t> v(n);
  for (auto& x : v) x = rng() % (max_d + 1);
  return DegreeSequence(v);
}

}  // namespace

TEST(Property, ErdosGallaiMatchesOracle) {
  std::mt19937_64 rng(100);
  for (int i = 0; i < 5000; ++i) {
    const auto d = random_sequence(rng, 8, 7);
    ASSERT_EQ(erdos_gallai_is_graphic(d), oracle::is_graphic_bruteforce(d));
  }
}

TEST(Property, RealizationsHaveRequestedDegrees) {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 300; ++i) {
    const auto d = random_sequence(rng, 6, 4);
    const auto set = oracle::enumerate_realizations(d);
    EXPECT_EQ(set.graphs.empty(), !erdos_gallai_is_graphic(d));
    for (const auto& g : set.graphs) {
      g.check_invariants();
      EXPECT_EQ(g.degrees(), std::vector<std::uint64_t>(d.begin(), d.end()));
    }
  }
}

// D∘d graphic  <=>  some realization of D has a matching of size d/2.
TEST(Property, ConcatenationMatchesMatchings) {
  std::mt19937_64 rng(102);
  int checked = 0;
  while (checked < 400) {
    const auto d = random_sequence(rng, 6, 4);
    if (d.size() < 2 || !erdos_gallai_is_graphic(d)) continue;
    const std::uint64_t k = 1 + rng() % (d.size() / 2);
    const auto set = oracle::enumerate_realizations(d);
    std::size_t best = 0;
    for (const auto& g : set.graphs) best = std::max(best, oracle::max_matching_bruteforce(g));
    EXPECT_EQ(erdos_gallai_is_graphic(d.concat(2 * k)), best >= k);
    ++checked;
  }
}

// Whenever the δ inequality holds, the deletion + coloring route finds d/2 edges.
TEST(Property, DeltaConditionGuaranteesMatching) {
  std::mt19937_64 rng(103);
  int triples = 0;
  for (int i = 0; i < 4000 && triples < 1500; ++i) {
    const auto d = random_sequence(rng, 8, 3);
    if (d.empty() || !erdos_gallai_is_graphic(d) || d.sum() == 0) continue;
    const auto g = *havel_hakimi_realize(d);
    const auto h = double_edge_swap(g, rng(), 50);
    for (std::uint64_t dd = 2; dd <= 8; dd += 2) {
      const auto delta = delta_condition(d, dd);
      if (!delta) continue;
      ++triples;
      const auto m = matching_of_size(h, dd / 2, *delta);
      ASSERT_TRUE(m);
      EXPECT_TRUE(is_matching_in(h, m->edges));
      EXPECT_LE(dd / 2, oracle::max_matching_bruteforce(h));
    }
  }
  EXPECT_GT(triples, 100);
}

TEST(Property, LpDpgImpliesMatchingInEveryRealization) {
  // The criterion only bites on long sequences; at n <= 8 that means mostly ones.
  int held = 0;
  for (std::size_t n = 2; n <= 8; ++n)
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::uint64_t> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = 1 + (mask >> i & 1u);
      const DegreeSequence d(v);
      if (!d.has_even_sum() || !erdos_gallai_is_graphic(d)) continue;
      for (std::uint64_t dd = 2; dd <= n; dd += 2) {
        const bool inf = lp_criterion_dpg(d, dd, LpExponent::infinity()).holds();
        const bool two = lp_criterion_dpg(d, dd).holds();
        const bool three = lp_criterion_dpg(d, dd, LpExponent{3.0}).holds();
        if (!inf && !two && !three) continue;
        ++held;
        for (const auto& g : oracle::enumerate_realizations(d).graphs)
          EXPECT_GE(oracle::max_matching_bruteforce(g), dd / 2);
      }
    }
  EXPECT_GT(held, 0);
}

TEST(Property, GrowthStepsPreserveOldAdjacencies) {
  const auto& t = testsupport::table();
  auto s = grow(3, t);
  for (Vertex n = 3; n < 400; ++n) {
    const auto before = s.graph;
    grow_to(s, n + 1, t);
    for (Vertex u = 1; u <= n; ++u) {
      EXPECT_EQ(s.graph.degree(u), before.degree(u));
      for (Vertex v : s.graph.neighbors(u))
        if (v <= n) {
          EXPECT_TRUE(before.has_edge(u, v));
        }
    }
  }
}
