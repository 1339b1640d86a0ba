#pragma once

// Prime tables, prime gaps, and gap statistics.
//
// Indexing follows the prime gap graph convention: p_1 = 2, p_2 = 3, ...,
// and a virtual p_0 = 1 so that the gap sequence starts (1, 1, 2, 2, 4, ...).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "primegap/error.hpp"

namespace primegap {

// floor(sqrt(x)), exact for the full 64-bit range.
inline std::uint64_t isqrt(std::uint64_t x) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(x)));
  while (r > 0 && r > x / r) --r;
  while ((r + 1) <= x / (r + 1)) ++r;
  return r;
}

struct SieveOptions {
  std::uint64_t segment_size = std::uint64_t{1} << 20;  // numbers per segment
  unsigned threads = 1;
};

// Sorted primes up to `limit`. Immutable; copies share storage.
class PrimeTable {
 public:
  PrimeTable() : primes_(std::make_shared<const std::vector<std::uint64_t>>()) {}

  // Builds a table from an explicit list. Only ordering and bounds are
  // checked, so tests can feed synthetic "prime" lists to the scans.
  static PrimeTable from_primes(std::uint64_t limit, std::vector<std::uint64_t> primes) {
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (primes[i] < 2) throw InvalidArgument("prime table entries must be >= 2");
      if (i > 0 && primes[i] <= primes[i - 1])
        throw InvalidArgument("prime table entries must be strictly increasing");
    }
    if (!primes.empty() && primes.back() > limit)
      throw InvalidArgument("prime table entry exceeds its limit");
    PrimeTable t;
    t.limit_ = limit;
    t.primes_ = std::make_shared<const std::vector<std::uint64_t>>(std::move(primes));
    return t;
  }

  std::uint64_t limit() const { return limit_; }
  std::size_t size() const { return primes_->size(); }
  std::span<const std::uint64_t> primes() const { return *primes_; }

  // p_index with p_0 = 1.
  std::uint64_t prime(std::size_t index) const {
    if (index == 0) return 1;
    if (index > size())
      throw RangeError("p_" + std::to_string(index) + " is beyond the sieve limit " +
                       std::to_string(limit_));
    return (*primes_)[index - 1];
  }

  // p_index - p_{index-1}, index >= 1.
  std::uint64_t gap(std::size_t index) const {
    if (index == 0) throw InvalidArgument("gap index starts at 1");
    return prime(index) - prime(index - 1);
  }

  // pi(x): number of primes <= x. x must not exceed the limit.
  std::size_t count_upto(std::uint64_t x) const {
    if (x > limit_)
      throw RangeError(std::to_string(x) + " exceeds the sieve limit " + std::to_string(limit_));
    return static_cast<std::size_t>(std::upper_bound(primes_->begin(), primes_->end(), x) -
                                    primes_->begin());
  }

  bool operator==(const PrimeTable& other) const {
    return limit_ == other.limit_ && *primes_ == *other.primes_;
  }

 private:
  std::uint64_t limit_ = 0;
  std::shared_ptr<const std::vector<std::uint64_t>> primes_;
};

namespace detail {

inline std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

// Appends the odd primes in [lo, hi) to `out`; lo is odd and >= 3.
inline void sieve_segment(std::uint64_t lo, std::uint64_t hi,
                          std::span<const std::uint64_t> base, std::vector<char>& marks,
                          std::vector<std::uint64_t>& out) {
  const std::uint64_t count = (hi - lo + 1) / 2;
  marks.assign(count, 0);
  for (std::uint64_t q : base) {
    if (q == 2) continue;
    if (q * q >= hi) break;
    std::uint64_t start = std::max(q * q, (lo + q - 1) / q * q);
    if (start % 2 == 0) start += q;
    for (std::uint64_t m = start; m < hi; m += 2 * q) marks[(m - lo) / 2] = 1;
  }
  for (std::uint64_t i = 0; i < count; ++i)
    if (!marks[i]) out.push_back(lo + 2 * i);
}

}  // namespace detail

// Segmented sieve of Eratosthenes over odd numbers; memory is O(segment + output).
inline PrimeTable sieve(std::uint64_t limit, const SieveOptions& options = {}) {
  if (limit < 2) throw InvalidArgument("sieve limit must be >= 2");
  if (options.segment_size < 2) throw InvalidArgument("segment size must be >= 2");
  const auto base = detail::small_primes(isqrt(limit));

  const std::uint64_t seg = options.segment_size + (options.segment_size % 2);
  const std::uint64_t end = limit + 1;  // exclusive
  const std::uint64_t n_segments = end > 3 ? (end - 3 + seg - 1) / seg : 0;
  const unsigned threads =
      static_cast<unsigned>(std::clamp<std::uint64_t>(options.threads, 1, std::max<std::uint64_t>(n_segments, 1)));

  std::vector<std::vector<std::uint64_t>> parts(threads);
  auto work = [&](unsigned t) {
    std::vector<char> marks;
    const std::uint64_t first = n_segments * t / threads;
    const std::uint64_t last = n_segments * (t + 1) / threads;
    for (std::uint64_t s = first; s < last; ++s) {
      const std::uint64_t lo = 3 + s * seg;
      detail::sieve_segment(lo, std::min(lo + seg, end), base, marks, parts[t]);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  std::vector<std::uint64_t> primes{2};
  std::size_t total = 1;
  for (const auto& p : parts) total += p.size();
  primes.reserve(total);
  for (const auto& p : parts) primes.insert(primes.end(), p.begin(), p.end());
  return PrimeTable::from_primes(limit, std::move(primes));
}

// Upper bound for p_n (Rosser–Schoenfeld style, padded for small n).
inline std::uint64_t nth_prime_upper_bound(std::uint64_t n) {
  if (n < 6) return 13;
  const double x = static_cast<double>(n);
  return static_cast<std::uint64_t>(x * (std::log(x) + std::log(std::log(x)))) + 16;
}

// First n prime gaps with the p_0 = 1 prefix: d_l = p_l - p_{l-1}, l = 1..n.
struct GapStream {
  std::vector<std::uint64_t> gaps;  // gaps[l - 1] = d_l

  std::size_t size() const { return gaps.size(); }
  std::uint64_t at(std::size_t l) const { return gaps.at(l - 1); }
};

inline GapStream prime_gaps(const PrimeTable& table, std::size_t n) {
  if (n > table.size())
    throw RangeError("need " + std::to_string(n) + " primes, table has " +
                     std::to_string(table.size()));
  GapStream out;
  out.gaps.reserve(n);
  std::uint64_t prev = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t p = table.primes()[i];
    out.gaps.push_back(p - prev);
    prev = p;
  }
  return out;
}

namespace detail {

// Number of primes <= x, checked so that p_{count+1} is also in the table.
inline std::size_t count_with_successor(const PrimeTable& table, std::uint64_t x) {
  if (x < 2) throw InvalidArgument("x must be >= 2");
  const std::size_t c = table.count_upto(x);
  if (c + 1 > table.size())
    throw RangeError("the prime after " + std::to_string(x) + " is beyond the sieve limit " +
                     std::to_string(table.limit()));
  return c;
}

}  // namespace detail

// max of p_{l+1} - p_l over p_l <= x.
inline std::uint64_t max_gap_up_to(const PrimeTable& table, std::uint64_t x) {
  const std::size_t c = detail::count_with_successor(table, x);
  const auto ps = table.primes();
  std::uint64_t best = 0;
  for (std::size_t i = 0; i < c; ++i) best = std::max(best, ps[i + 1] - ps[i]);
  return best;
}

// sum of (p_{l+1} - p_l)^2 over p_l <= x.
inline std::uint64_t sum_squared_gaps(const PrimeTable& table, std::uint64_t x) {
  const std::size_t c = detail::count_with_successor(table, x);
  const auto ps = table.primes();
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < c; ++i) {
    const std::uint64_t g = ps[i + 1] - ps[i];
    sum += g * g;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// On-disk cache: "PGT1", u64 limit, u64 count, then count u64 deltas, all
// little-endian. The first delta is measured from 0.

namespace detail {

inline void put_u64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b.data(), 8);
}

inline bool get_u64(std::istream& is, std::uint64_t& v) {
  std::array<unsigned char, 8> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return true;
}

}  // namespace detail

inline void write_prime_cache(const std::filesystem::path& path, const PrimeTable& table) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  os.write("PGT1", 4);
  detail::put_u64(os, table.limit());
  detail::put_u64(os, table.size());
  std::uint64_t prev = 0;
  for (std::uint64_t p : table.primes()) {
    detail::put_u64(os, p - prev);
    prev = p;
  }
  if (!os) throw FormatError("write failed: " + path.string());
}

inline PrimeTable read_prime_cache(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  std::array<char, 4> magic{};
  std::uint64_t limit = 0, count = 0;
  if (!is.read(magic.data(), 4) || std::string(magic.data(), 4) != "PGT1")
    throw FormatError(path.string() + ": bad magic");
  if (!detail::get_u64(is, limit) || !detail::get_u64(is, count))
    throw FormatError(path.string() + ": truncated header");
  std::error_code ec;
  const auto bytes = std::filesystem::file_size(path, ec);
  if (ec || bytes != 20 + 8 * count) throw FormatError(path.string() + ": size mismatch");
  std::vector<std::uint64_t> primes;
  primes.reserve(count);
  std::uint64_t cur = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t delta = 0;
    if (!detail::get_u64(is, delta)) throw FormatError(path.string() + ": truncated body");
    if (delta == 0) throw FormatError(path.string() + ": zero delta");
    cur += delta;
    primes.push_back(cur);
  }
  try {
    return PrimeTable::from_primes(limit, std::move(primes));
  } catch (const InvalidArgument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

// Sieves `limit`, reading/writing a cache file under cache_dir when given.
// A broken cache file is ignored and rewritten.
inline PrimeTable load_or_sieve(std::uint64_t limit, const SieveOptions& options,
                                const std::optional<std::filesystem::path>& cache_dir) {
  if (!cache_dir) return sieve(limit, options);
  const auto file = *cache_dir / ("primes_" + std::to_string(limit) + ".pgt");
  std::error_code ec;
  if (std::filesystem::exists(file, ec)) {
    try {
      auto t = read_prime_cache(file);
      if (t.limit() == limit) return t;
    } catch (const FormatError&) {
    }
  }
  auto t = sieve(limit, options);
  std::filesystem::create_directories(*cache_dir, ec);
  try {
    write_prime_cache(file, t);
  } catch (const FormatError&) {
  }
  return t;
}

}  // namespace primegap
