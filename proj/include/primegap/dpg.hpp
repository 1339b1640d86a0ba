#pragma once

// Degree-preserving growth of prime gap graphs G_2, G_3, ...
//
// G_2 is the single edge realizing (1, 1). Step n -> n+1 removes a matching of
// size (p_{n+1} - p_n)/2 and joins the new vertex n+1 to its endpoints, so
// vertex l keeps degree p_l - p_{l-1} for the rest of the run.

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "primegap/degseq.hpp"
#include "primegap/error.hpp"
#include "primegap/graph.hpp"
#include "primegap/matching.hpp"
#include "primegap/primes.hpp"
#include "primegap/verify.hpp"

namespace primegap {

// How a step's matching was obtained.
enum class MatchingRoute : std::uint8_t {
  lemma = 0,          // δ from delta_condition, Vizing on the low-degree subgraph
  full_coloring = 1,  // no admissible δ; largest class of a Vizing coloring of G
  exhaustive = 2,     // bounded backtracking search
};

inline const char* to_string(MatchingRoute r) {
  switch (r) {
    case MatchingRoute::lemma: return "lemma";
    case MatchingRoute::full_coloring: return "full-coloring";
    case MatchingRoute::exhaustive: return "exhaustive";
  }
  return "?";
}

struct StepRecord {
  std::uint64_t n = 0;      // vertex count before the step
  std::uint64_t gap = 0;    // p_{n+1} - p_n, degree of the new vertex
  std::uint64_t delta = 0;  // δ used by the lemma route, 0 otherwise
  MatchingRoute route = MatchingRoute::lemma;
  std::vector<Edge> matching;

  bool operator==(const StepRecord&) const = default;
};

struct GrowthState {
  SimpleGraph graph;
  std::uint64_t seed = 0;
  std::vector<StepRecord> log;

  Vertex n() const { return graph.vertex_count(); }
  bool operator==(const GrowthState&) const = default;
};

struct ProgressEvent {
  std::uint64_t n = 0;
  std::uint64_t p_n = 0;
  std::uint64_t gap = 0;
  std::uint64_t delta = 0;
  double elapsed_s = 0;
};

struct GrowOptions {
  std::uint64_t seed = 0;  // 0 = canonical matchings; otherwise randomized per step
  std::uint64_t progress_interval = 1000;
  std::function<void(const ProgressEvent&)> on_progress;
  std::uint64_t checkpoint_interval = 10000;
  std::function<void(const GrowthState&)> on_checkpoint;
};

// Thrown when no matching of the required size is found. Carries the state
// just before the failing step; for prime gap graphs this would be a
// counterexample worth keeping.
class GrowthFailure : public std::runtime_error {
 public:
  GrowthFailure(const std::string& what, GrowthState state, std::uint64_t gap)
      : std::runtime_error(what), state_(std::move(state)), gap_(gap) {}
  const GrowthState& state() const { return state_; }
  std::uint64_t gap() const { return gap_; }

 private:
  GrowthState state_;
  std::uint64_t gap_;
};

inline GrowthState initial_state(std::uint64_t seed = 0) {
  GrowthState s;
  s.seed = seed;
  s.graph = SimpleGraph(2);
  s.graph.add_edge(1, 2);
  return s;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct FoundMatching {
  Matching matching;
  std::uint64_t delta;
  MatchingRoute route;
};

// Matching of size gap/2 in g, whose degree sequence is summarized by hist.
inline std::optional<FoundMatching> find_step_matching(const SimpleGraph& g,
                                                       const DegreeHistogram& hist,
                                                       std::uint64_t gap, std::uint64_t seed,
                                                       bool early_stop,
                                                       const CandidateIndex* index = nullptr) {
  const std::uint64_t k = gap / 2;
  MatchingOptions opts;
  opts.early_stop = early_stop;
  opts.index = index;
  if (seed != 0) {
    const std::uint64_t s = splitmix64(seed ^ splitmix64(g.vertex_count()));
    opts.start = static_cast<Vertex>(1 + s % g.vertex_count());
    opts.sample_seed = splitmix64(s);
  }
  if (const auto delta = delta_condition(hist, gap)) {
    auto m = matching_of_size(g, k, *delta, opts);
    if (!m)
      throw std::logic_error("matching_of_size failed although the delta inequality holds (n = " +
                             std::to_string(g.vertex_count()) + ", delta = " +
                             std::to_string(*delta) + ")");
    return FoundMatching{std::move(*m), *delta, MatchingRoute::lemma};
  }
  // No admissible δ: color all of G (palette Δ+1) and try its largest class.
  if (auto m = matching_of_size(g, k, g.max_degree() + 1, opts))
    return FoundMatching{std::move(*m), 0, MatchingRoute::full_coloring};
  if (auto m = find_matching_exhaustive(g, k))
    return FoundMatching{std::move(*m), 0, MatchingRoute::exhaustive};
  return std::nullopt;
}

inline bool degrees_match_gaps(const SimpleGraph& g, const PrimeTable& table) {
  for (Vertex v = 1; v <= g.vertex_count(); ++v)
    if (g.degree(v) != table.gap(v)) return false;
  return true;
}

}  // namespace detail

// Advances `state` until it has `target` vertices.
inline void grow_to(GrowthState& state, Vertex target, const PrimeTable& table,
                    const GrowOptions& options = {}) {
  if (target < 2) throw InvalidArgument("target n must be >= 2");
  if (target > table.size())
    throw RangeError("p_" + std::to_string(target) + " is beyond the sieve limit " +
                     std::to_string(table.limit()));
  if (!detail::degrees_match_gaps(state.graph, table))
    throw InvalidArgument("state is not the prime gap graph of its size");

  DegreeHistogram hist;
  for (Vertex v = 1; v <= state.n(); ++v) hist.add(table.gap(v));
  CandidateIndex index(state.graph);
  const auto start = std::chrono::steady_clock::now();

  while (state.n() < target) {
    const Vertex n = state.n();
    const std::uint64_t gap = table.prime(n + 1) - table.prime(n);
    auto found = detail::find_step_matching(state.graph, hist, gap, state.seed, true, &index);
    if (!found)
      throw GrowthFailure("no matching of size " + std::to_string(gap / 2) + " in G_" +
                              std::to_string(n),
                          state, gap);
    apply_dp_step(state.graph, found->matching.edges);
    index.refresh(state.graph, n + 1);
    for (const Edge& e : found->matching.edges) {
      index.refresh(state.graph, e.u);
      index.refresh(state.graph, e.v);
    }
    hist.add(gap);
    state.log.push_back({n, gap, found->delta, found->route, std::move(found->matching.edges)});

    const Vertex now = n + 1;
    if (now <= 1000 || now % 100 == 0 || now == target) {
      if (state.graph.degree(now) != gap || !detail::degrees_match_gaps(state.graph, table))
        throw std::logic_error("degree sequence drifted from PD^" + std::to_string(now));
    }
    if (options.on_progress && options.progress_interval && now % options.progress_interval == 0) {
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      options.on_progress({now, table.prime(now), gap, state.log.back().delta, elapsed});
    }
    if (options.on_checkpoint && options.checkpoint_interval &&
        now % options.checkpoint_interval == 0)
      options.on_checkpoint(state);
  }
}

inline GrowthState grow(Vertex target, const PrimeTable& table, const GrowOptions& options = {}) {
  GrowthState state = initial_state(options.seed);
  grow_to(state, target, table, options);
  return state;
}

// Re-validates a frozen state: simplicity, degrees against PD^n, the step log,
// and that G_n has a matching of size (p_{n+1} - p_n)/2.
inline VerificationReport verify_state(const GrowthState& state, const PrimeTable& table) {
  detail::Stopwatch clock;
  const Vertex n = state.n();
  auto r = VerificationReport::make("dpg-state", {{"n", n}, {"seed", state.seed}});
  auto fail = [&](const std::string& what, json detail_json = json::object()) {
    r.outcome = Outcome::fail;
    detail_json["failed"] = what;
    r.witnesses.push_back(std::move(detail_json));
  };

  try {
    state.graph.check_invariants();
  } catch (const std::logic_error& e) {
    fail("simple", {{"error", e.what()}});
  }
  r.summary["simple"] = r.outcome == Outcome::pass;

  const bool multiset = is_prime_gap_graph(state.graph, table);
  const bool labelled = detail::degrees_match_gaps(state.graph, table);
  r.summary["prime_gap_graph"] = multiset;
  r.summary["degree_by_label"] = labelled;
  if (!multiset) fail("prime_gap_graph");
  if (!labelled) fail("degree_by_label");

  const bool log_ok = n >= 2 && state.log.size() == n - 2;
  r.summary["log_consistent"] = log_ok;
  if (!log_ok) fail("log_consistent", {{"log_records", state.log.size()}});

  if (n + 1 > table.size()) {
    fail("next_gap_available", {{"n", n}});
  } else {
    const std::uint64_t gap = table.prime(n + 1) - table.prime(n);
    DegreeHistogram hist;
    for (Vertex v = 1; v <= n; ++v) hist.add(state.graph.degree(v));
    r.summary["next_gap"] = gap;
    auto found = detail::find_step_matching(state.graph, hist, gap, 0, false);
    if (found && is_matching_in(state.graph, found->matching.edges) &&
        found->matching.size() == gap / 2) {
      r.summary["matching_route"] = to_string(found->route);
      r.summary["delta"] = found->delta;
    } else {
      fail("next_matching", {{"gap", gap}});
    }
  }
  r.runtime_ms = clock.ms();
  return r;
}

// ---------------------------------------------------------------------------
// Checkpoints: "PGCK", u32 version, u64 header length, JSON header, edges as
// (u32, u32), step records, and a trailing FNV-1a 64 checksum. Little-endian.

inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

class ByteWriter {
 public:
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t>& data() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}
  std::span<const std::uint8_t> bytes(std::size_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8() { return bytes(1)[0]; }
  std::uint32_t u32() {
    auto b = bytes(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    auto b = bytes(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw FormatError("checkpoint truncated");
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

inline std::uint64_t fnv1a(std::span<const std::uint8_t> data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : data) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

inline std::vector<std::uint8_t> serialize_state(const GrowthState& state) {
  detail::ByteWriter w;
  const std::array<std::uint8_t, 4> magic{'P', 'G', 'C', 'K'};
  w.bytes(magic);
  w.u32(kCheckpointVersion);
  const json header = {{"format", "primegap-checkpoint"},
                       {"version", kCheckpointVersion},
                       {"n", state.n()},
                       {"m", state.graph.edge_count()},
                       {"seed", state.seed},
                       {"log_records", state.log.size()}};
  const std::string text = header.dump();
  w.u64(text.size());
  w.bytes({reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
  for (const Edge& e : state.graph.edges()) {
    w.u32(e.u);
    w.u32(e.v);
  }
  for (const StepRecord& s : state.log) {
    w.u64(s.n);
    w.u64(s.gap);
    w.u64(s.delta);
    w.u8(static_cast<std::uint8_t>(s.route));
    w.u32(static_cast<std::uint32_t>(s.matching.size()));
    for (const Edge& e : s.matching) {
      w.u32(e.u);
      w.u32(e.v);
    }
  }
  w.u64(detail::fnv1a(w.data()));
  return std::move(w.data());
}

inline GrowthState deserialize_state(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) throw FormatError("checkpoint truncated");
  const auto body = bytes.first(bytes.size() - 8);
  detail::ByteReader tail(bytes.subspan(bytes.size() - 8));
  detail::ByteReader r(body);
  const auto magic = r.bytes(4);
  if (!(magic[0] == 'P' && magic[1] == 'G' && magic[2] == 'C' && magic[3] == 'K'))
    throw FormatError("not a checkpoint (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    throw FormatError("checkpoint version " + std::to_string(version) + ", expected " +
                      std::to_string(kCheckpointVersion));
  if (tail.u64() != detail::fnv1a(body)) throw FormatError("checkpoint checksum mismatch (truncated or corrupt)");

  const std::uint64_t header_len = r.u64();
  if (header_len > r.remaining()) throw FormatError("checkpoint truncated");
  const auto hb = r.bytes(header_len);
  json header;
  try {
    header = json::parse(hb.begin(), hb.end());
  } catch (const json::exception& e) {
    throw FormatError(std::string("checkpoint header: ") + e.what());
  }
  GrowthState s;
  std::uint64_t n = 0, m = 0, records = 0;
  try {
    n = header.at("n").get<std::uint64_t>();
    m = header.at("m").get<std::uint64_t>();
    records = header.at("log_records").get<std::uint64_t>();
    s.seed = header.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("checkpoint header: ") + e.what());
  }
  if (m > r.remaining() / 8) throw FormatError("checkpoint truncated");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    const std::uint32_t u = r.u32();
    const std::uint32_t v = r.u32();
    edges.emplace_back(u, v);
  }
  try {
    s.graph = SimpleGraph::from_edges(static_cast<Vertex>(n), edges);
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("checkpoint edges: ") + e.what());
  }
  for (std::uint64_t i = 0; i < records; ++i) {
    StepRecord rec;
    rec.n = r.u64();
    rec.gap = r.u64();
    rec.delta = r.u64();
    const std::uint8_t route = r.u8();
    if (route > 2) throw FormatError("checkpoint: unknown matching route");
    rec.route = static_cast<MatchingRoute>(route);
    const std::uint32_t k = r.u32();
    if (k > r.remaining() / 8) throw FormatError("checkpoint truncated");
    for (std::uint32_t j = 0; j < k; ++j) {
      const std::uint32_t u = r.u32();
      const std::uint32_t v = r.u32();
      rec.matching.emplace_back(u, v);
    }
    s.log.push_back(std::move(rec));
  }
  if (r.remaining() != 0) throw FormatError("checkpoint has trailing bytes");
  return s;
}

// Writes via a temporary file and rename, so a crash never leaves a partial checkpoint.
inline void checkpoint(const GrowthState& state, const std::filesystem::path& path) {
  const auto bytes = serialize_state(state);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw FormatError("cannot open " + tmp.string() + " for writing");
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw FormatError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline GrowthState restore(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                  std::istreambuf_iterator<char>());
  return deserialize_state(bytes);
}

}  // namespace primegap
