#pragma once

// Graphicality tests and realization for integer degree sequences.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "primegap/error.hpp"
#include "primegap/graph.hpp"

namespace primegap {

__extension__ typedef unsigned __int128 u128;

class DegreeSequence {
 public:
  DegreeSequence() = default;
  DegreeSequence(std::initializer_list<std::uint64_t> values) : d_(values) {}
  explicit DegreeSequence(std::vector<std::uint64_t> values) : d_(std::move(values)) {}

  std::size_t size() const { return d_.size(); }
  bool empty() const { return d_.empty(); }
  std::uint64_t operator[](std::size_t i) const { return d_[i]; }
  std::span<const std::uint64_t> values() const { return d_; }
  auto begin() const { return d_.begin(); }
  auto end() const { return d_.end(); }

  std::uint64_t sum() const { return std::accumulate(d_.begin(), d_.end(), std::uint64_t{0}); }
  std::uint64_t max() const { return d_.empty() ? 0 : *std::max_element(d_.begin(), d_.end()); }
  bool has_even_sum() const { return sum() % 2 == 0; }

  // D ∘ d
  DegreeSequence concat(std::uint64_t d) const {
    auto v = d_;
    v.push_back(d);
    return DegreeSequence(std::move(v));
  }

  bool operator==(const DegreeSequence&) const = default;

 private:
  std::vector<std::uint64_t> d_;
};

// Erdős–Gallai with sorted prefix sums; the tail sum of min(k, d_l) is split
// at the partition point of entries >= k. O(n log n).
inline bool erdos_gallai_is_graphic(const DegreeSequence& seq) {
  if (!seq.has_even_sum()) return false;
  std::vector<std::uint64_t> d(seq.begin(), seq.end());
  std::sort(d.begin(), d.end(), std::greater<>());
  const std::size_t n = d.size();
  std::vector<u128> prefix(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + d[i];

  for (std::size_t k = 1; k <= n; ++k) {
    // entries >= k occupy positions [0, big)
    const auto big = static_cast<std::size_t>(
        std::partition_point(d.begin(), d.end(), [k](std::uint64_t x) { return x >= k; }) -
        d.begin());
    const std::size_t split = std::max(k, big);
    const u128 capped = static_cast<u128>(k) * (split - k);
    const u128 rest = prefix[n] - prefix[split];
    const u128 rhs = static_cast<u128>(k) * (k - 1) + capped + rest;
    if (prefix[k] > rhs) return false;
  }
  return true;
}

// Havel–Hakimi on a sorted copy carrying labels; ties go to the smallest
// original label. Returns nullopt when the sequence is not graphic.
inline std::optional<SimpleGraph> havel_hakimi_realize(const DegreeSequence& seq) {
  const std::size_t n = seq.size();
  if (!seq.has_even_sum()) return std::nullopt;
  struct Node {
    std::uint64_t deg;
    Vertex label;
  };
  auto before = [](const Node& a, const Node& b) {
    return a.deg != b.deg ? a.deg > b.deg : a.label < b.label;
  };
  std::vector<Node> nodes;
  nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) nodes.push_back({seq[i], static_cast<Vertex>(i + 1)});
  std::sort(nodes.begin(), nodes.end(), before);

  SimpleGraph g(static_cast<Vertex>(n));
  std::size_t head = 0;
  while (head < n && nodes[head].deg > 0) {
    const Node top = nodes[head++];
    if (top.deg > n - head) return std::nullopt;
    const auto mid = nodes.begin() + static_cast<std::ptrdiff_t>(head + top.deg);
    for (auto it = nodes.begin() + static_cast<std::ptrdiff_t>(head); it != mid; ++it) {
      if (it->deg == 0) return std::nullopt;
      --it->deg;
      g.add_edge(top.label, it->label);
    }
    std::inplace_merge(nodes.begin() + static_cast<std::ptrdiff_t>(head), mid, nodes.end(),
                       before);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Symmetric L^p criteria.

// Exponent p in (1, ∞].
struct LpExponent {
  double value = 2.0;

  static LpExponent infinity() { return {std::numeric_limits<double>::infinity()}; }
  bool is_infinite() const { return std::isinf(value); }
  bool is_two() const { return value == 2.0; }
};

enum class LpVerdict { holds, fails, indeterminate };

inline const char* to_string(LpVerdict v) {
  switch (v) {
    case LpVerdict::holds: return "holds";
    case LpVerdict::fails: return "fails";
    case LpVerdict::indeterminate: return "indeterminate";
  }
  return "?";
}

// lhs/rhs are the two sides of the inequality as stated (norms, not the
// squared or powered forms used for the exact comparison).
struct LpCheckResult {
  LpVerdict verdict = LpVerdict::fails;
  long double lhs = 0;
  long double rhs = 0;
  LpExponent p;
  bool exact = false;
  long double error_bound = 0;  // absolute bound on log(lhs) - log(rhs) when !exact

  bool holds() const { return verdict == LpVerdict::holds; }
};

namespace detail {

inline u128 checked_mul(u128 a, u128 b) {
  if (a != 0 && b > std::numeric_limits<u128>::max() / a)
    throw std::overflow_error("128-bit overflow in exact L^p comparison");
  return a * b;
}

inline void require_lp_domain(const DegreeSequence& seq, LpExponent p) {
  if (seq.empty()) throw InvalidArgument("empty degree sequence");
  if (!(p.value > 1.0)) throw InvalidArgument("p must lie in (1, inf]");
  for (std::uint64_t d : seq)
    if (d == 0) throw InvalidArgument("L^p criteria need strictly positive entries");
  if (!seq.has_even_sum()) throw InvalidArgument("L^p criteria need an even sum");
}

// log(sum x^p) computed as p*log(M) + log(sum (x/M)^p), with its error budget.
struct LogPowerSum {
  long double value;
  long double error;
};

inline LogPowerSum log_power_sum(std::span<const long double> xs, long double p) {
  const long double m = *std::max_element(xs.begin(), xs.end());
  long double s = 0;
  for (long double x : xs) s += std::pow(x / m, p);
  constexpr long double eps = std::numeric_limits<long double>::epsilon();
  const long double n = static_cast<long double>(xs.size());
  const long double err = 8 * eps * (n + p + 8 + p * std::fabs(std::log(m)));
  return {p * std::log(m) + std::log(s), err};
}

inline LpVerdict compare_logs(long double lhs, long double rhs, long double err) {
  if (lhs <= rhs - err) return LpVerdict::holds;
  if (lhs > rhs + err) return LpVerdict::fails;
  return LpVerdict::indeterminate;
}

}  // namespace detail

// ‖2 + D‖_p <= n^(1/2 + 1/(2p)). Sufficient for graphicality; a failure is
// inconclusive, not a proof of non-graphicality.
inline LpCheckResult lp_criterion_graphic(const DegreeSequence& seq, LpExponent p = {}) {
  detail::require_lp_domain(seq, p);
  const std::uint64_t n = seq.size();
  LpCheckResult r;
  r.p = p;
  if (p.is_infinite()) {
    const u128 top = static_cast<u128>(seq.max()) + 2;
    r.exact = true;
    r.verdict = detail::checked_mul(top, top) <= n ? LpVerdict::holds : LpVerdict::fails;
    r.lhs = static_cast<long double>(top);
    r.rhs = std::sqrt(static_cast<long double>(n));
    return r;
  }
  if (p.is_two()) {
    u128 s = 0;
    for (std::uint64_t d : seq) s += detail::checked_mul(d + 2, d + 2);
    // (sum (2+d)^2)^2 <= n^3
    const u128 lhs = detail::checked_mul(s, s);
    const u128 rhs = detail::checked_mul(detail::checked_mul(n, n), n);
    r.exact = true;
    r.verdict = lhs <= rhs ? LpVerdict::holds : LpVerdict::fails;
    r.lhs = std::sqrt(static_cast<long double>(s));
    r.rhs = std::pow(static_cast<long double>(n), 0.75L);
    return r;
  }
  const long double pp = p.value;
  std::vector<long double> xs;
  xs.reserve(n);
  for (std::uint64_t d : seq) xs.push_back(static_cast<long double>(d) + 2);
  const auto lps = detail::log_power_sum(xs, pp);
  // compare p*log‖2+D‖_p = log sum  against  (p+1)/2 * log n
  const long double rhs_log = (pp + 1) / 2 * std::log(static_cast<long double>(n));
  constexpr long double eps = std::numeric_limits<long double>::epsilon();
  const long double err = lps.error + 8 * eps * (pp + 1) * std::fabs(rhs_log);
  r.exact = false;
  r.error_bound = err;
  r.verdict = detail::compare_logs(lps.value, rhs_log, err);
  r.lhs = std::exp(lps.value / pp);
  r.rhs = std::exp(rhs_log / pp);
  return r;
}

// 4 d^(1-1/p) ‖D‖_p <= ‖D‖_1. Sufficient for every realization of D to carry
// a matching of size d/2.
inline LpCheckResult lp_criterion_dpg(const DegreeSequence& seq, std::uint64_t d,
                                      LpExponent p = {}) {
  detail::require_lp_domain(seq, p);
  if (d < 2 || d % 2 != 0) throw InvalidArgument("d must be an even integer >= 2");
  const u128 total = seq.sum();
  LpCheckResult r;
  r.p = p;
  if (p.is_infinite()) {
    const u128 lhs = detail::checked_mul(detail::checked_mul(4, d), seq.max());
    r.exact = true;
    r.verdict = lhs <= total ? LpVerdict::holds : LpVerdict::fails;
    r.lhs = static_cast<long double>(lhs);
    r.rhs = static_cast<long double>(total);
    return r;
  }
  if (p.is_two()) {
    u128 sq = 0;
    for (std::uint64_t x : seq) sq += detail::checked_mul(x, x);
    // (4 sqrt(d) ‖D‖_2)^2 = 16 d sum d_l^2 <= ‖D‖_1^2
    const u128 lhs = detail::checked_mul(detail::checked_mul(16, d), sq);
    r.exact = true;
    r.verdict = lhs <= detail::checked_mul(total, total) ? LpVerdict::holds : LpVerdict::fails;
    r.lhs = 4 * std::sqrt(static_cast<long double>(d)) * std::sqrt(static_cast<long double>(sq));
    r.rhs = static_cast<long double>(total);
    return r;
  }
  const long double pp = p.value;
  std::vector<long double> xs(seq.begin(), seq.end());
  const auto lps = detail::log_power_sum(xs, pp);
  // p*log4 + (p-1)*log d + log sum d^p  vs  p*log ‖D‖_1
  const long double dd = static_cast<long double>(d);
  const long double tot = static_cast<long double>(total);
  const long double lhs_log = pp * std::log(4.0L) + (pp - 1) * std::log(dd) + lps.value;
  const long double rhs_log = pp * std::log(tot);
  constexpr long double eps = std::numeric_limits<long double>::epsilon();
  const long double err =
      lps.error + 8 * eps * (pp * (2 + std::fabs(std::log(dd)) + std::fabs(std::log(tot))) + 8);
  r.exact = false;
  r.error_bound = err;
  r.verdict = detail::compare_logs(lhs_log, rhs_log, err);
  r.lhs = std::exp(lhs_log / pp);
  r.rhs = tot;
  return r;
}

// ---------------------------------------------------------------------------
// δ condition:  δ d <= Σ_{d_l < δ} d_l − Σ_{d_l >= δ} d_l.

// Degree counts, maintained incrementally by the growth engine.
class DegreeHistogram {
 public:
  DegreeHistogram() = default;
  explicit DegreeHistogram(const DegreeSequence& seq) {
    for (std::uint64_t d : seq) add(d);
  }

  void add(std::uint64_t d) {
    if (d >= count_.size()) count_.resize(d + 1, 0);
    ++count_[d];
    total_ += d;
    ++n_;
  }

  std::uint64_t total() const { return total_; }
  std::uint64_t size() const { return n_; }
  std::uint64_t count(std::uint64_t d) const { return d < count_.size() ? count_[d] : 0; }
  std::uint64_t max() const {
    for (std::size_t d = count_.size(); d-- > 0;)
      if (count_[d]) return d;
    return 0;
  }

 private:
  std::vector<std::uint64_t> count_;
  std::uint64_t total_ = 0;
  std::uint64_t n_ = 0;
};

namespace detail {

// Candidate δ values are 1 and v + 1 for each present value v: between two
// candidates the sums are constant while δ d grows, so the first δ of each
// plateau is the only one worth testing. Past max + 1 nothing new can hold.
template <class Values>
std::optional<std::uint64_t> smallest_delta(const Values& sorted_distinct_with_weight,
                                            std::uint64_t total, std::uint64_t d) {
  u128 below = 0;  // Σ_{d_l < δ} d_l
  auto test = [&](std::uint64_t delta) {
    const u128 lhs = static_cast<u128>(delta) * d;
    const u128 above = static_cast<u128>(total) - below;
    return below >= above && lhs <= below - above;
  };
  if (test(1)) return 1;
  for (const auto& [value, weight] : sorted_distinct_with_weight) {
    below += weight;  // entries equal to `value` are now < value + 1
    if (test(value + 1)) return value + 1;
  }
  return std::nullopt;
}

}  // namespace detail

inline std::optional<std::uint64_t> delta_condition(const DegreeHistogram& hist,
                                                    std::uint64_t d) {
  if (d < 2 || d % 2 != 0) throw InvalidArgument("d must be an even integer >= 2");
  std::vector<std::pair<std::uint64_t, u128>> groups;
  const std::uint64_t top = hist.max();
  for (std::uint64_t v = 1; v <= top; ++v)
    if (hist.count(v)) groups.emplace_back(v, static_cast<u128>(v) * hist.count(v));
  return detail::smallest_delta(groups, hist.total(), d);
}

// Smallest δ >= 1 satisfying the condition, or nullopt.
inline std::optional<std::uint64_t> delta_condition(const DegreeSequence& seq, std::uint64_t d) {
  if (d < 2 || d % 2 != 0) throw InvalidArgument("d must be an even integer >= 2");
  std::vector<std::uint64_t> v(seq.begin(), seq.end());
  std::sort(v.begin(), v.end());
  std::vector<std::pair<std::uint64_t, u128>> groups;
  for (std::uint64_t x : v) {
    if (x == 0) continue;
    if (!groups.empty() && groups.back().first == x)
      groups.back().second += x;
    else
      groups.emplace_back(x, x);
  }
  return detail::smallest_delta(groups, seq.sum(), d);
}

// Direct evaluation of the δ inequality for one δ.
inline bool delta_inequality_holds(std::span<const std::uint64_t> degrees, std::uint64_t delta,
                                   std::uint64_t d) {
  u128 below = 0, above = 0;
  for (std::uint64_t x : degrees) (x < delta ? below : above) += x;
  return below >= above && static_cast<u128>(delta) * d <= below - above;
}

}  // namespace primegap
