#pragma once

// Empirical checks of the prime-gap inequalities behind the prime gap graph
// results. Integer quantities are compared exactly; logarithmic bounds use
// long double with a relative guard and report "indeterminate" inside it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "primegap/degseq.hpp"
#include "primegap/error.hpp"
#include "primegap/primes.hpp"

namespace primegap {

using json = nlohmann::json;

enum class Outcome { pass, fail, indeterminate, info };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::indeterminate: return "indeterminate";
    case Outcome::info: return "info";
  }
  return "?";
}

// Relative guard for floating-point comparisons against log-based bounds.
inline constexpr long double kRelativeGuard = 1e-12L;

struct VerificationReport {
  std::string check;
  json params = json::object();
  Outcome outcome = Outcome::pass;
  std::vector<json> witnesses;  // first failure and extremal values
  std::string mode = "exact";   // "exact" | "float-with-bound"
  double runtime_ms = 0;
  json summary = json::object();

  static VerificationReport make(std::string check, json params = json::object(),
                                 std::string mode = "exact") {
    VerificationReport r;
    r.check = std::move(check);
    r.params = std::move(params);
    r.mode = std::move(mode);
    return r;
  }

  bool pass() const { return outcome == Outcome::pass || outcome == Outcome::info; }

  json to_json() const {
    json j;
    j["check"] = check;
    j["params"] = params;
    j["pass"] = pass();
    j["outcome"] = to_string(outcome);
    j["witnesses"] = witnesses;
    j["mode"] = mode;
    j["runtime_ms"] = runtime_ms;
    j["summary"] = summary;
    return j;
  }
};

// 0 = all pass, 1 = any failure, 2 = indeterminate present (and no failure).
inline int exit_code(std::span<const VerificationReport> reports) {
  bool indeterminate = false;
  for (const auto& r : reports) {
    if (r.outcome == Outcome::fail) return 1;
    if (r.outcome == Outcome::indeterminate) indeterminate = true;
  }
  return indeterminate ? 2 : 0;
}

namespace detail {

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline void require_index(const PrimeTable& table, std::size_t n) {
  if (n + 1 > table.size())
    throw RangeError("p_" + std::to_string(n + 1) + " is beyond the sieve limit " +
                     std::to_string(table.limit()));
}

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return a / b + (a % b != 0); }

// Sign of a - b with a relative guard: -1, 0 (indeterminate), +1.
inline int guarded_sign(long double a, long double b) {
  const long double scale = std::max(std::fabs(a), std::fabs(b));
  if (std::fabs(a - b) <= kRelativeGuard * scale) return 0;
  return a < b ? -1 : 1;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// N(p_{n+1} - p_n) + 2 Σ_{l <= n, d_l >= N} d_l < p_n, with d_l = p_l - p_{l-1}.
inline bool check_delta(std::size_t n, std::uint64_t big_n, const PrimeTable& table) {
  if (n == 0) throw InvalidArgument("n must be >= 1");
  detail::require_index(table, n);
  u128 lhs = static_cast<u128>(big_n) * (table.prime(n + 1) - table.prime(n));
  for (std::size_t l = 1; l <= n; ++l) {
    const std::uint64_t g = table.gap(l);
    if (g >= big_n) lhs += 2 * static_cast<u128>(g);
  }
  return lhs < table.prime(n);
}

// With N = max_{l <= n}(1 + d_l):  (p_{n+1} - p_n)/2 <= ceil((p_n - 1) / (2N)).
inline bool check_delta2(std::size_t n, const PrimeTable& table) {
  if (n < 5) throw InvalidArgument("delta2 is stated for n >= 5");
  detail::require_index(table, n);
  std::uint64_t big_n = 0;
  for (std::size_t l = 1; l <= n; ++l) big_n = std::max(big_n, 1 + table.gap(l));
  const std::uint64_t half_gap = (table.prime(n + 1) - table.prime(n)) / 2;
  return half_gap <= detail::ceil_div(table.prime(n) - 1, 2 * big_n);
}

// Range form of check_delta2 with an incremental N.
inline VerificationReport delta2_scan(std::size_t from, std::size_t to, const PrimeTable& table) {
  detail::Stopwatch clock;
  if (from < 5 || from > to) throw InvalidArgument("need 5 <= from <= to");
  detail::require_index(table, to);
  auto r = VerificationReport::make("delta2", {{"from", from}, {"to", to}});
  std::uint64_t big_n = 0;
  std::uint64_t checked = 0;
  for (std::size_t l = 1; l <= to; ++l) {
    big_n = std::max(big_n, 1 + table.gap(l));
    if (l < from) continue;
    const std::uint64_t half_gap = (table.prime(l + 1) - table.prime(l)) / 2;
    const std::uint64_t rhs = detail::ceil_div(table.prime(l) - 1, 2 * big_n);
    ++checked;
    if (half_gap > rhs && r.outcome == Outcome::pass) {
      r.outcome = Outcome::fail;
      r.witnesses.push_back({{"n", l}, {"p_n", table.prime(l)}, {"p_n+1", table.prime(l + 1)},
                             {"N", big_n}, {"lhs", half_gap}, {"rhs", rhs}});
    }
  }
  r.summary["checked"] = checked;
  r.runtime_ms = clock.ms();
  return r;
}

// Range form of check_delta with N = max(1 + d_l), where the large-gap sum is
// empty and the test reduces to N (p_{n+1} - p_n) < p_n.
inline VerificationReport delta_scan(std::size_t from, std::size_t to, const PrimeTable& table) {
  detail::Stopwatch clock;
  if (from < 1 || from > to) throw InvalidArgument("need 1 <= from <= to");
  detail::require_index(table, to);
  auto r = VerificationReport::make("delta", {{"from", from}, {"to", to}, {"N", "max(1+gap)"}});
  std::uint64_t big_n = 0;
  std::vector<std::uint64_t> failures;
  for (std::size_t l = 1; l <= to; ++l) {
    big_n = std::max(big_n, 1 + table.gap(l));
    if (l < from) continue;
    const u128 lhs = static_cast<u128>(big_n) * (table.prime(l + 1) - table.prime(l));
    if (!(lhs < table.prime(l))) {
      failures.push_back(l);
      if (r.witnesses.size() < 16)
        r.witnesses.push_back({{"n", l}, {"N", big_n}, {"p_n", table.prime(l)},
                               {"lhs", static_cast<std::uint64_t>(lhs)}});
    }
  }
  r.outcome = failures.empty() ? Outcome::pass : Outcome::fail;
  r.summary["failures"] = failures.size();
  if (!failures.empty()) r.summary["last_failure"] = failures.back();
  r.runtime_ms = clock.ms();
  return r;
}

// ---------------------------------------------------------------------------
struct PnormConditions {
  bool cond3 = false;  // Σ (2 + d_l)^2 <= n^(3/2)
  bool cond4 = false;  // 16 (p_{n+1} - p_n) Σ d_l^2 <= (p_n - 1)^2
};

namespace detail {

inline PnormConditions pnorm_from_sums(std::size_t n, u128 sum_sq_plus2, u128 sum_sq,
                                       std::uint64_t next_gap, std::uint64_t p_n) {
  const u128 nn = n;
  const u128 pm1 = p_n - 1;
  return {sum_sq_plus2 * sum_sq_plus2 <= nn * nn * nn, 16 * next_gap * sum_sq <= pm1 * pm1};
}

}  // namespace detail

inline PnormConditions check_pnorm_conditions(std::size_t n, const PrimeTable& table) {
  if (n == 0) throw InvalidArgument("n must be >= 1");
  detail::require_index(table, n);
  u128 s2 = 0, s = 0;
  for (std::size_t l = 1; l <= n; ++l) {
    const u128 g = table.gap(l);
    s2 += (g + 2) * (g + 2);
    s += g * g;
  }
  return detail::pnorm_from_sums(n, s2, s, table.prime(n + 1) - table.prime(n), table.prime(n));
}

// Scans n in [1, to] and reports, for each condition, the smallest n0 such
// that it holds on all of [n0, to].
inline VerificationReport pnorm_scan(std::size_t to, const PrimeTable& table) {
  detail::Stopwatch clock;
  if (to < 1) throw InvalidArgument("to must be >= 1");
  detail::require_index(table, to);
  auto r = VerificationReport::make("pnorm", {{"to", to}});
  r.outcome = Outcome::info;
  u128 s2 = 0, s = 0;
  std::size_t last_fail3 = 0, last_fail4 = 0;
  for (std::size_t l = 1; l <= to; ++l) {
    const u128 g = table.gap(l);
    s2 += (g + 2) * (g + 2);
    s += g * g;
    const auto c =
        detail::pnorm_from_sums(l, s2, s, table.prime(l + 1) - table.prime(l), table.prime(l));
    if (!c.cond3) last_fail3 = l;
    if (!c.cond4) last_fail4 = l;
  }
  r.summary["cond3_n0"] = last_fail3 + 1;
  r.summary["cond4_n0"] = last_fail4 + 1;
  r.summary["cond3_holds_at_end"] = last_fail3 < to;
  r.summary["cond4_holds_at_end"] = last_fail4 < to;
  if (last_fail3) r.witnesses.push_back({{"cond", "cond3"}, {"last_failure", last_fail3}});
  if (last_fail4) r.witnesses.push_back({{"cond", "cond4"}, {"last_failure", last_fail4}});
  r.runtime_ms = clock.ms();
  return r;
}

// ---------------------------------------------------------------------------
struct LargeGapSum {
  std::uint64_t sum = 0;       // Σ_{x <= p_l <= 2x, p_{l+1} - p_l >= N} (p_{l+1} - p_l)
  long double bound = 0;       // constant * x * ln^2 x / N
  Outcome outcome = Outcome::pass;  // pass: sum < bound
};

inline LargeGapSum sum_large_gaps(std::uint64_t x, std::uint64_t big_n, const PrimeTable& table,
                                  long double constant = 163) {
  if (x < 2) throw InvalidArgument("x must be >= 2");
  if (big_n == 0) throw InvalidArgument("N must be > 0");
  const std::uint64_t top = 2 * x;
  const std::size_t last = primegap::detail::count_with_successor(table, top);
  const std::size_t first = table.count_upto(x - 1);  // primes < x
  LargeGapSum out;
  const auto ps = table.primes();
  for (std::size_t i = first; i < last; ++i) {
    const std::uint64_t g = ps[i + 1] - ps[i];
    if (g >= big_n) out.sum += g;
  }
  const long double lx = std::log(static_cast<long double>(x));
  out.bound = constant * static_cast<long double>(x) * lx * lx / static_cast<long double>(big_n);
  switch (detail::guarded_sign(static_cast<long double>(out.sum), out.bound)) {
    case -1: out.outcome = Outcome::pass; break;
    case 0: out.outcome = Outcome::indeterminate; break;
    default: out.outcome = Outcome::fail; break;
  }
  return out;
}

inline VerificationReport sum_large_gaps_grid(std::span<const std::uint64_t> xs,
                                              std::span<const std::uint64_t> ns,
                                              const PrimeTable& table,
                                              long double constant = 163) {
  detail::Stopwatch clock;
  auto r = VerificationReport::make("selberg", json::object(), "float-with-bound");
  r.params = {{"x", std::vector<std::uint64_t>(xs.begin(), xs.end())},
              {"N", std::vector<std::uint64_t>(ns.begin(), ns.end())},
              {"constant", static_cast<double>(constant)}};
  json rows = json::array();
  for (std::uint64_t x : xs)
    for (std::uint64_t big_n : ns) {
      const auto s = sum_large_gaps(x, big_n, table, constant);
      json row = {{"x", x}, {"N", big_n}, {"sum", s.sum}, {"bound", static_cast<double>(s.bound)},
                  {"outcome", to_string(s.outcome)}};
      rows.push_back(row);
      if (s.outcome == Outcome::fail) {
        if (r.outcome != Outcome::fail) r.witnesses.push_back(row);
        r.outcome = Outcome::fail;
      } else if (s.outcome == Outcome::indeterminate && r.outcome == Outcome::pass) {
        r.outcome = Outcome::indeterminate;
        r.witnesses.push_back(row);
      }
    }
  r.summary["grid"] = rows;
  r.runtime_ms = clock.ms();
  return r;
}

// ---------------------------------------------------------------------------
// Short-interval scans. Failure at some x in (p_l, p_{l+1}) means
// x + h(x) < p_{l+1}; with x + h(x) increasing, only the smallest admissible x
// matters: max(p_l, lo).

struct ScanOptions {
  unsigned threads = 1;
};

namespace detail {

struct IntervalPair {
  std::uint64_t a;  // worst x: max(p_l, lo)
  std::uint64_t b;  // p_{l+1}
};

inline constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);

// Result of one pair: -1 fail, 0 indeterminate, +1 pass.
using PairTest = std::function<int(const IntervalPair&)>;

struct ChunkResult {
  std::uint64_t pairs = 0;
  std::vector<json> failures;
  std::vector<json> indeterminate;
  json extremal;  // pair with the smallest slack
  std::size_t extremal_index = kNoIndex;
  long double slack = std::numeric_limits<long double>::infinity();
};

inline VerificationReport interval_scan(
    std::string name, std::uint64_t lo, std::uint64_t hi, const PrimeTable& table,
    const ScanOptions& options, const PairTest& test,
    const std::function<long double(const IntervalPair&)>& slack_of, std::string mode) {
  Stopwatch clock;
  if (lo > hi) throw InvalidArgument("need lo <= hi");
  if (hi > table.limit())
    throw RangeError(std::to_string(hi) + " exceeds the sieve limit " +
                     std::to_string(table.limit()));
  const auto ps = table.primes();
  if (ps.empty() || ps.back() < hi)
    throw RangeError("no prime >= " + std::to_string(hi) + " within the sieve limit " +
                     std::to_string(table.limit()));
  // Pairs with p_{l+1} > lo and p_l < hi.
  const auto first_it = std::upper_bound(ps.begin(), ps.end(), lo);  // first prime > lo
  if (first_it == ps.begin())
    throw RangeError("no prime <= " + std::to_string(lo) + " in the table");
  const std::size_t first = static_cast<std::size_t>(first_it - ps.begin()) - 1;
  const std::size_t last =
      static_cast<std::size_t>(std::lower_bound(ps.begin(), ps.end(), hi) - ps.begin());

  const std::size_t total = last > first ? last - first : 0;
  const unsigned threads =
      static_cast<unsigned>(std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(total, 1)));
  std::vector<ChunkResult> results(threads);
  auto work = [&](unsigned t) {
    auto& res = results[t];
    const std::size_t begin = first + total * t / threads;
    const std::size_t end = first + total * (t + 1) / threads;
    for (std::size_t i = begin; i < end; ++i) {
      const IntervalPair pair{std::max(ps[i], lo), ps[i + 1]};
      ++res.pairs;
      const int verdict = test(pair);
      auto witness = [&] { return json{{"p_l", ps[i]}, {"p_l+1", ps[i + 1]}, {"x", pair.a}}; };
      if (verdict < 0 && res.failures.size() < 16) res.failures.push_back(witness());
      if (verdict == 0 && res.indeterminate.size() < 16) res.indeterminate.push_back(witness());
      const long double s = slack_of(pair);
      if (s < res.slack) {
        res.slack = s;
        res.extremal_index = i;
      }
    }
    if (res.extremal_index != kNoIndex)
      res.extremal = {{"p_l", ps[res.extremal_index]},
                      {"p_l+1", ps[res.extremal_index + 1]},
                      {"x", std::max(ps[res.extremal_index], lo)}};
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  auto r = VerificationReport::make(std::move(name), {{"from", lo}, {"to", hi}});
  r.mode = std::move(mode);
  std::uint64_t pairs = 0;
  std::vector<json> failures, indeterminate;
  long double best = std::numeric_limits<long double>::infinity();
  json extremal;
  for (auto& res : results) {
    pairs += res.pairs;
    failures.insert(failures.end(), res.failures.begin(), res.failures.end());
    indeterminate.insert(indeterminate.end(), res.indeterminate.begin(), res.indeterminate.end());
    if (res.slack < best) {
      best = res.slack;
      extremal = res.extremal;
    }
  }
  if (!failures.empty()) {
    r.outcome = Outcome::fail;
    r.witnesses.push_back({{"first_failure", failures.front()}});
  } else if (!indeterminate.empty()) {
    r.outcome = Outcome::indeterminate;
    r.witnesses.push_back({{"first_indeterminate", indeterminate.front()}});
  }
  if (!extremal.is_null()) {
    extremal["slack"] = static_cast<double>(best);
    r.witnesses.push_back({{"tightest_pair", extremal}});
  }
  r.summary["pairs_checked"] = pairs;
  r.runtime_ms = clock.ms();
  return r;
}

}  // namespace detail

// Every x in [lo, hi] has a prime in [x, x + sqrt(x)]. Exact integer test per
// consecutive pair: a + sqrt(a) >= b  <=>  (b - a)^2 <= a.
inline VerificationReport legendre_variant_scan(std::uint64_t lo, std::uint64_t hi,
                                                const PrimeTable& table,
                                                const ScanOptions& options = {}) {
  if (lo < 117) throw InvalidArgument("the short-interval statement starts at x = 117");
  auto test = [](const detail::IntervalPair& p) {
    const u128 g = p.b - p.a;
    return g * g <= p.a ? 1 : -1;
  };
  auto slack = [](const detail::IntervalPair& p) {
    return std::sqrt(static_cast<long double>(p.a)) - static_cast<long double>(p.b - p.a);
  };
  return detail::interval_scan("legendre", lo, hi, table, options, test, slack, "exact");
}

// Every x in [lo, hi] has a prime in [x, x + (22/25) sqrt(x) log x].
inline VerificationReport cms_interval_scan(std::uint64_t lo, std::uint64_t hi,
                                            const PrimeTable& table,
                                            const ScanOptions& options = {}) {
  if (lo < 4) throw InvalidArgument("the interval statement starts at x = 4");
  auto reach = [](std::uint64_t a) {
    const long double x = static_cast<long double>(a);
    return x + 22.0L / 25.0L * std::sqrt(x) * std::log(x);
  };
  auto test = [reach](const detail::IntervalPair& p) {
    // b below the reach passes; inside the guard is indeterminate.
    return -detail::guarded_sign(static_cast<long double>(p.b), reach(p.a));
  };
  auto slack = [reach](const detail::IntervalPair& p) {
    return reach(p.a) - static_cast<long double>(p.b);
  };
  return detail::interval_scan("cms", lo, hi, table, options, test, slack, "float-with-bound");
}

// Σ_{p_l <= x} (p_{l+1} - p_l)^2 / x^(4/3) on a grid. Informational.
inline VerificationReport heath_brown_ratio(std::span<const std::uint64_t> xs,
                                            const PrimeTable& table) {
  detail::Stopwatch clock;
  auto r = VerificationReport::make("heath-brown", json::object(), "float-with-bound");
  r.outcome = Outcome::info;
  r.params = {{"x", std::vector<std::uint64_t>(xs.begin(), xs.end())}};
  json rows = json::array();
  for (std::uint64_t x : xs) {
    const std::uint64_t s = sum_squared_gaps(table, x);
    const long double ratio =
        static_cast<long double>(s) / std::pow(static_cast<long double>(x), 4.0L / 3.0L);
    rows.push_back({{"x", x}, {"sum_squared_gaps", s}, {"ratio", static_cast<double>(ratio)}});
  }
  r.summary["rows"] = rows;
  r.runtime_ms = clock.ms();
  return r;
}

// ---------------------------------------------------------------------------
// Random partitions of 2m read as degree sequences.

// counts[n][k] = number of partitions of n into parts <= k.
class PartitionCounts {
 public:
  static constexpr std::uint64_t kMaxN = 200;

  explicit PartitionCounts(std::uint64_t n) : n_(n) {
    if (n > kMaxN) throw InvalidArgument("partition table supports n <= 200");
    table_.assign((n + 1) * (n + 1), 0);
    for (std::uint64_t k = 0; k <= n; ++k) at(0, k) = 1;
    for (std::uint64_t i = 1; i <= n; ++i)
      for (std::uint64_t k = 1; k <= n; ++k)
        at(i, k) = at(i, k - 1) + (k <= i ? at(i - k, k) : 0);
  }

  std::uint64_t count(std::uint64_t n, std::uint64_t k) const {
    return table_[n * (n_ + 1) + std::min(k, n_)];
  }
  std::uint64_t total() const { return count(n_, n_); }

  // Uniform over all partitions of n, parts in non-increasing order.
  template <class Rng>
  std::vector<std::uint64_t> sample(Rng& rng) const {
    std::vector<std::uint64_t> parts;
    std::uint64_t n = n_, k = n_;
    while (n > 0) {
      std::uniform_int_distribution<std::uint64_t> dist(0, count(n, k) - 1);
      std::uint64_t r = dist(rng);
      std::uint64_t j = std::min(n, k);
      // count(n, k) = Σ_{j=1}^{min(n,k)} count(n - j, j); walk from the largest part down.
      for (;; --j) {
        const std::uint64_t c = count(n - j, j);
        if (r < c) break;
        r -= c;
      }
      parts.push_back(j);
      n -= j;
      k = j;
    }
    return parts;
  }

 private:
  std::uint64_t& at(std::uint64_t n, std::uint64_t k) { return table_[n * (n_ + 1) + k]; }
  std::uint64_t at(std::uint64_t n, std::uint64_t k) const { return table_[n * (n_ + 1) + k]; }

  std::uint64_t n_;
  std::vector<std::uint64_t> table_;
};

struct PittelEstimate {
  std::uint64_t m = 0;
  std::uint64_t samples = 0;
  std::uint64_t graphic = 0;
  double fraction = 0;
  double ci_low = 0;  // Wilson 95%
  double ci_high = 0;
};

inline PittelEstimate pittel_fraction(std::uint64_t m, std::uint64_t samples, std::uint64_t seed) {
  if (m < 1) throw InvalidArgument("m must be >= 1");
  if (samples < 1) throw InvalidArgument("samples must be >= 1");
  const PartitionCounts counts(2 * m);
  std::mt19937_64 rng(seed);
  PittelEstimate e{.m = m, .samples = samples};
  for (std::uint64_t s = 0; s < samples; ++s)
    if (erdos_gallai_is_graphic(DegreeSequence(counts.sample(rng)))) ++e.graphic;
  const double n = static_cast<double>(samples);
  const double f = static_cast<double>(e.graphic) / n;
  constexpr double z = 1.959963984540054;
  const double denom = 1 + z * z / n;
  const double centre = (f + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(f * (1 - f) / n + z * z / (4 * n * n)) / denom;
  e.fraction = f;
  e.ci_low = std::max(0.0, centre - half);
  e.ci_high = std::min(1.0, centre + half);
  return e;
}

}  // namespace primegap
