#pragma once

#include <vector>

#include "primegap/primegap.hpp"

namespace testsupport {

// Primes up to a little past 10^6, sieved once per test binary.
inline const primegap::PrimeTable& table() {
  static const primegap::PrimeTable t = primegap::sieve(1'000'100);
  return t;
}

// A fixed realization of PD^10, used as a running example.
inline primegap::SimpleGraph figure_g10() {
  const std::vector<primegap::Edge> e{{1, 5}, {5, 7}, {5, 10}, {2, 10}, {3, 5}, {6, 8}, {8, 10},
                                      {9, 10}, {4, 9}, {7, 9},  {3, 9}, {4, 10}, {7, 10}, {6, 7}};
  return primegap::SimpleGraph::from_edges(10, e);
}

inline primegap::SimpleGraph from(primegap::Vertex n, std::vector<primegap::Edge> e) {
  return primegap::SimpleGraph::from_edges(n, e);
}

}  // namespace testsupport
