// primegap: grow prime gap graphs, test degree sequences, run range checks.
//
// Exit codes: 0 all checks pass, 1 some check failed (or growth got stuck),
// 2 indeterminate result, bad input, or a range beyond the sieve limit.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "primegap/primegap.hpp"

namespace pg = primegap;
using json = nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";
// Maximal prime gaps stay below this far beyond 10^18, so a sieve reaching
// x + kGapHeadroom always contains the successor of the largest prime <= x.
constexpr std::uint64_t kGapHeadroom = 1600;

struct Common {
  std::uint64_t limit = 100'000'000;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t seed = 0;
  bool no_timing = false;
  bool quiet = false;
};

struct GrowArgs {
  std::uint64_t n = 0;
  std::string out;
  std::string format = "json";
  std::string checkpoint;
  std::uint64_t checkpoint_interval = 10'000;
  std::string resume;
  std::uint64_t verify_every = 0;
};

struct CheckArgs {
  std::string seq;
  std::string file;
  std::uint64_t prime_gaps = 0;
  std::string method = "all";
  std::string out;
};

struct VerifyArgs {
  std::string check;
  std::optional<std::uint64_t> from, to;
  std::vector<std::uint64_t> xs, ns;
  double constant = 163;
  double compare_constant = 4;
  std::uint64_t m = 20;
  std::uint64_t samples = 10'000;
  std::string state;
  std::string report;
};

struct ExportArgs {
  std::string in;
  std::string format = "json";
  std::string out;
};

struct BenchArgs {
  std::uint64_t n = 10'000;
  std::uint64_t scan_to = 10'000'000;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::optional<std::filesystem::path> cache_dir() {
  if (const char* d = std::getenv("PRIMEGAP_CACHE_DIR"); d && *d) return std::filesystem::path(d);
  return std::nullopt;
}

json common_echo(const Common& c, const std::string& command) {
  json j = {{"command", command},
            {"version", kVersion},
            {"limit", c.limit},
            {"threads", c.threads},
            {"seed", c.seed},
            {"no_timing", c.no_timing}};
  const auto dir = cache_dir();
  j["cache_dir"] = dir ? json(dir->string()) : json(nullptr);
  return j;
}

// --limit bounds the numbers a command may ask about. The sieve runs a little
// past it so the successor of the last prime <= limit is known, and never
// further than the command needs. Requests beyond that become range errors.
pg::PrimeTable load_table(const Common& c, std::uint64_t needed) {
  const std::uint64_t upto = std::max<std::uint64_t>(2, std::min(c.limit + kGapHeadroom, needed));
  pg::SieveOptions o;
  o.threads = c.threads;
  return pg::load_or_sieve(upto, o, cache_dir());
}

double elapsed_ms(std::chrono::steady_clock::time_point start, const Common& c) {
  if (c.no_timing) return 0;
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

void scrub_timing(pg::VerificationReport& r, const Common& c) {
  if (c.no_timing) r.runtime_ms = 0;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw UsageError("cannot write " + path);
  os << text;
  if (!os) throw UsageError("write failed: " + path);
}

std::string render_graph(const pg::SimpleGraph& g, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    os << pg::io::to_json(g).dump() << '\n';
  } else if (format == "edges") {
    pg::io::write_edge_list(os, g);
  } else if (format == "dot") {
    pg::io::write_dot(os, g);
  } else {
    throw UsageError("unknown format '" + format + "' (json, edges, dot)");
  }
  return os.str();
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------

int cmd_grow(const Common& c, const GrowArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  if (a.n < 2) throw UsageError("--n must be >= 2");
  if (a.n > UINT32_MAX) throw UsageError("--n too large");
  json config = common_echo(c, "grow");
  config.update({{"n", a.n},
                 {"out", a.out},
                 {"format", a.format},
                 {"checkpoint", a.checkpoint},
                 {"checkpoint_interval", a.checkpoint_interval},
                 {"resume", a.resume},
                 {"verify_every", a.verify_every}});

  // p_{n+1} is needed for the final matching check.
  const auto table = load_table(c, pg::nth_prime_upper_bound(a.n + 1));
  if (table.size() < a.n + 1)
    throw pg::RangeError("p_" + std::to_string(a.n + 1) + " exceeds --limit " +
                         std::to_string(c.limit));

  pg::GrowthState state = a.resume.empty() ? pg::initial_state(c.seed) : pg::restore(a.resume);
  config["seed"] = state.seed;
  if (state.n() > a.n) throw UsageError("resumed state already has more than --n vertices");

  pg::GrowOptions opts;
  opts.seed = state.seed;
  if (!c.quiet)
    opts.on_progress = [&](const pg::ProgressEvent& e) {
      std::cerr << "n=" << e.n << " p_n=" << e.p_n << " d=" << e.gap << " delta=" << e.delta;
      if (!c.no_timing) std::cerr << " elapsed=" << e.elapsed_s << "s";
      std::cerr << '\n';
    };
  if (!a.checkpoint.empty()) {
    opts.checkpoint_interval = a.checkpoint_interval;
    opts.on_checkpoint = [&](const pg::GrowthState& s) { pg::checkpoint(s, a.checkpoint); };
  }

  json samples = json::array();
  bool sampled_ok = true;
  try {
    while (state.n() < a.n) {
      std::uint64_t next = a.n;
      if (a.verify_every)
        next = std::min<std::uint64_t>(a.n, (state.n() / a.verify_every + 1) * a.verify_every);
      pg::grow_to(state, static_cast<pg::Vertex>(next), table, opts);
      if (a.verify_every && next < a.n) {
        auto r = pg::verify_state(state, table);
        scrub_timing(r, c);
        sampled_ok = sampled_ok && r.pass();
        samples.push_back({{"n", state.n()}, {"outcome", pg::to_string(r.outcome)}});
      }
    }
  } catch (const pg::GrowthFailure& f) {
    const std::string dump = "primegap_failure_n" + std::to_string(f.state().n()) + ".pgck";
    pg::checkpoint(f.state(), dump);
    print_json({{"config", config},
                {"error", f.what()},
                {"n", f.state().n()},
                {"gap", f.gap()},
                {"state_dump", dump}});
    return 1;
  }
  if (!a.checkpoint.empty()) pg::checkpoint(state, a.checkpoint);
  if (!a.out.empty()) write_text(a.out, render_graph(state.graph, a.format));

  auto report = pg::verify_state(state, table);
  scrub_timing(report, c);
  json routes = {{"lemma", 0}, {"full-coloring", 0}, {"exhaustive", 0}};
  for (const auto& s : state.log) routes[pg::to_string(s.route)] = routes[pg::to_string(s.route)].get<int>() + 1;

  const bool ok = report.pass() && sampled_ok;
  print_json({{"config", config},
              {"n", state.n()},
              {"edges", state.graph.edge_count()},
              {"routes", routes},
              {"sampled_checks", samples},
              {"final_check", report.to_json()},
              {"pass", ok},
              {"runtime_ms", elapsed_ms(start, c)}});
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------

int cmd_check(const Common& c, const CheckArgs& a) {
  const std::vector<std::string> known{"eg", "hh", "lp2", "lpinf", "all"};
  if (std::find(known.begin(), known.end(), a.method) == known.end())
    throw UsageError("unknown --method '" + a.method + "' (eg, hh, lp2, lpinf, all)");
  const int sources = !a.seq.empty() + !a.file.empty() + (a.prime_gaps > 0);
  if (sources != 1) throw UsageError("give exactly one of --seq, --file, --prime-gaps");

  std::vector<pg::DegreeSequence> seqs;
  if (!a.seq.empty()) {
    seqs.push_back(pg::io::parse_degree_sequence(a.seq));
  } else if (!a.file.empty()) {
    std::ifstream in(a.file);
    if (!in) throw UsageError("cannot read " + a.file);
    seqs = pg::io::read_degree_sequences(in);
  } else {
    const auto table = load_table(c, pg::nth_prime_upper_bound(a.prime_gaps));
    seqs.emplace_back(pg::prime_gaps(table, a.prime_gaps).gaps);
  }

  auto want = [&](const char* m) { return a.method == "all" || a.method == m; };
  json results = json::array();
  std::string realization_text;
  for (const auto& d : seqs) {
    json r = {{"length", d.size()}, {"sum", d.sum()}};
    if (d.size() <= 50) r["sequence"] = std::vector<std::uint64_t>(d.begin(), d.end());
    if (want("eg")) r["eg"] = pg::erdos_gallai_is_graphic(d) ? "graphic" : "not graphic";
    if (want("hh")) {
      const auto g = pg::havel_hakimi_realize(d);
      r["hh"] = g ? "graphic" : "not graphic";
      if (g) {
        if (!a.out.empty()) {
          std::ostringstream os;
          pg::io::write_edge_list(os, *g);
          realization_text += os.str();
        } else if (g->edge_count() <= 10'000) {
          r["realization"] = pg::io::to_json(*g);
        }
      }
    }
    for (const auto& [name, p] : {std::pair{"lp2", pg::LpExponent{}},
                                  std::pair{"lpinf", pg::LpExponent::infinity()}}) {
      if (!want(name)) continue;
      try {
        const auto res = pg::lp_criterion_graphic(d, p);
        r[name] = res.holds() ? "graphic (sufficient criterion holds)"
                              : std::string("inconclusive (criterion ") + pg::to_string(res.verdict) + ")";
      } catch (const pg::InvalidArgument& e) {
        r[name] = std::string("not applicable: ") + e.what();
      }
    }
    results.push_back(std::move(r));
  }
  if (!a.out.empty()) write_text(a.out, realization_text);
  json config = common_echo(c, "check");
  config.update({{"seq", a.seq}, {"file", a.file}, {"prime_gaps", a.prime_gaps}, {"method", a.method}, {"out", a.out}});
  print_json({{"config", config}, {"results", results}});
  return 0;
}

// ---------------------------------------------------------------------------

std::uint64_t need_index(std::uint64_t to) { return pg::nth_prime_upper_bound(to + 1); }

int cmd_verify(const Common& c, const VerifyArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  json config = common_echo(c, "verify");
  config["check"] = a.check;
  std::vector<pg::VerificationReport> reports;
  const std::string& k = a.check;

  auto range = [&](std::uint64_t from, std::uint64_t to) {
    const std::uint64_t f = a.from.value_or(from), t = a.to.value_or(to);
    config["from"] = f;
    config["to"] = t;
    return std::pair{f, t};
  };
  auto grid = [&](std::vector<std::uint64_t> xs_default) {
    auto xs = a.xs.empty() ? std::move(xs_default) : a.xs;
    config["x"] = xs;
    return xs;
  };

  if (k == "delta2" || k == "delta") {
    const auto [f, t] = range(k == "delta2" ? 5 : 1, 44);
    const auto table = load_table(c, need_index(t));
    reports.push_back(k == "delta2" ? pg::delta2_scan(f, t, table) : pg::delta_scan(f, t, table));
  } else if (k == "pnorm") {
    const auto [f, t] = range(1, 10'000);
    (void)f;
    const auto table = load_table(c, need_index(t));
    reports.push_back(pg::pnorm_scan(t, table));
  } else if (k == "selberg") {
    const auto xs = grid({1000, 10'000, 100'000, 1'000'000});
    auto ns = a.ns.empty() ? std::vector<std::uint64_t>{2, 10, 30, 100} : a.ns;
    config["N"] = ns;
    config["constant"] = a.constant;
    config["compare_constant"] = a.compare_constant;
    const auto table = load_table(c, 2 * *std::max_element(xs.begin(), xs.end()) + kGapHeadroom);
    auto r = pg::sum_large_gaps_grid(xs, ns, table, a.constant);
    // The same sums against a second constant, reported but not gating.
    const auto cmp = pg::sum_large_gaps_grid(xs, ns, table, a.compare_constant);
    r.summary["comparison"] = {{"constant", a.compare_constant},
                               {"outcome", pg::to_string(cmp.outcome)},
                               {"grid", cmp.summary["grid"]}};
    reports.push_back(std::move(r));
  } else if (k == "legendre" || k == "cms") {
    const auto [f, t] = range(k == "legendre" ? 117 : 4, 1'000'000);
    const auto table = load_table(c, t + kGapHeadroom);
    pg::ScanOptions o;
    o.threads = c.threads;
    reports.push_back(k == "legendre" ? pg::legendre_variant_scan(f, t, table, o)
                                      : pg::cms_interval_scan(f, t, table, o));
  } else if (k == "heath-brown") {
    const auto xs = grid({1000, 10'000, 100'000, 1'000'000});
    const auto table = load_table(c, *std::max_element(xs.begin(), xs.end()) + kGapHeadroom);
    reports.push_back(pg::heath_brown_ratio(xs, table));
  } else if (k == "maxgap") {
    const auto xs = grid({2000});
    const auto table = load_table(c, *std::max_element(xs.begin(), xs.end()) + kGapHeadroom);
    auto r = pg::VerificationReport::make("maxgap", {{"x", xs}});
    r.outcome = pg::Outcome::info;
    json rows = json::array();
    for (auto x : xs) rows.push_back({{"x", x}, {"max_gap", pg::max_gap_up_to(table, x)}});
    r.summary["rows"] = rows;
    reports.push_back(std::move(r));
  } else if (k == "pittel") {
    config.update({{"m", a.m}, {"samples", a.samples}});
    const auto e = pg::pittel_fraction(a.m, a.samples, c.seed);
    auto r = pg::VerificationReport::make("pittel", {{"m", a.m}, {"samples", a.samples}, {"seed", c.seed}},
                                          "float-with-bound");
    r.outcome = pg::Outcome::info;
    r.summary = {{"graphic", e.graphic}, {"fraction", e.fraction}, {"ci95", {e.ci_low, e.ci_high}}};
    reports.push_back(std::move(r));
  } else if (k == "state") {
    if (a.state.empty()) throw UsageError("verify state needs --state <checkpoint>");
    config["state"] = a.state;
    const auto s = pg::restore(a.state);
    const auto table = load_table(c, pg::nth_prime_upper_bound(s.n() + 1));
    reports.push_back(pg::verify_state(s, table));
  } else {
    throw UsageError("unknown check '" + k +
                     "' (delta, delta2, pnorm, selberg, legendre, cms, heath-brown, maxgap, pittel, state)");
  }

  for (auto& r : reports) scrub_timing(r, c);
  json out = {{"config", config}, {"reports", json::array()}};
  for (const auto& r : reports) out["reports"].push_back(r.to_json());
  const int code = pg::exit_code(reports);
  out["exit_code"] = code;
  out["runtime_ms"] = elapsed_ms(start, c);
  if (!a.report.empty()) write_text(a.report, out.dump(2) + "\n");
  print_json(out);
  return code;
}

// ---------------------------------------------------------------------------

int cmd_export(const Common& c, const ExportArgs& a) {
  if (a.in.empty()) throw UsageError("export needs --in");
  pg::SimpleGraph g;
  const std::filesystem::path in(a.in);
  if (in.extension() == ".json") {
    std::ifstream is(in);
    if (!is) throw UsageError("cannot read " + a.in);
    try {
      g = pg::io::graph_from_json(json::parse(is));
    } catch (const json::exception& e) {
      throw pg::FormatError(e.what());
    }
  } else if (in.extension() == ".txt" || in.extension() == ".edges") {
    std::ifstream is(in);
    if (!is) throw UsageError("cannot read " + a.in);
    g = pg::io::read_edge_list(is);
  } else {
    g = pg::restore(in).graph;
  }
  const std::string text = render_graph(g, a.format);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_text(a.out, text);
    json config = common_echo(c, "export");
    config.update({{"in", a.in}, {"format", a.format}, {"out", a.out}});
    print_json({{"config", config}, {"n", g.vertex_count()}, {"edges", g.edge_count()}});
  }
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_bench(const Common& c, const BenchArgs& a) {
  using clock = std::chrono::steady_clock;
  json rows = json::array();
  auto t0 = clock::now();
  const auto table = load_table(c, std::max(a.scan_to + kGapHeadroom, pg::nth_prime_upper_bound(a.n + 1)));
  rows.push_back({{"task", "sieve"}, {"limit", table.limit()}, {"primes", table.size()}, {"ms", elapsed_ms(t0, c)}});

  t0 = clock::now();
  pg::GrowOptions go;
  go.seed = c.seed;
  const auto s = pg::grow(static_cast<pg::Vertex>(a.n), table, go);
  rows.push_back({{"task", "grow"}, {"n", s.n()}, {"ms", elapsed_ms(t0, c)}});

  t0 = clock::now();
  pg::ScanOptions so;
  so.threads = c.threads;
  const auto r = pg::legendre_variant_scan(117, std::min(a.scan_to, table.limit() - kGapHeadroom), table, so);
  rows.push_back({{"task", "legendre"}, {"to", r.params["to"]}, {"outcome", pg::to_string(r.outcome)},
                  {"ms", elapsed_ms(t0, c)}});
  json config = common_echo(c, "bench");
  config.update({{"n", a.n}, {"scan_to", a.scan_to}});
  print_json({{"config", config}, {"results", rows}});
  return r.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prime gap graphs: degree-preserving growth and numeric checks"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  Common common;
  app.add_option("--limit", common.limit, "Sieve limit")->capture_default_str();
  app.add_option("--threads", common.threads, "Worker threads for sieve and scans")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", common.seed, "Seed for randomized paths (0 = canonical)")->capture_default_str();
  app.add_flag("--no-timing", common.no_timing, "Report 0 for all run times (byte-identical output)");
  app.add_flag("-q,--quiet", common.quiet, "No progress output");

  GrowArgs ga;
  auto* grow = app.add_subcommand("grow", "Grow the prime gap graph G_n by DP-steps");
  grow->add_option("--n", ga.n, "Target vertex count")->required();
  grow->add_option("--out", ga.out, "Write the final graph here");
  grow->add_option("--format", ga.format, "json | edges | dot")->capture_default_str();
  grow->add_option("--checkpoint", ga.checkpoint, "Checkpoint file");
  grow->add_option("--checkpoint-interval", ga.checkpoint_interval)->capture_default_str();
  grow->add_option("--resume", ga.resume, "Resume from a checkpoint");
  grow->add_option("--verify-every", ga.verify_every, "Run the full state check every k vertices");

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "Graphicality verdicts for degree sequences");
  check->add_option("--seq", ca.seq, "Sequence, e.g. \"3 3 1 1\"");
  check->add_option("--file", ca.file, "One sequence per line");
  check->add_option("--prime-gaps", ca.prime_gaps, "Use PD^N");
  check->add_option("--method", ca.method, "eg | hh | lp2 | lpinf | all")->capture_default_str();
  check->add_option("--out", ca.out, "Write Havel-Hakimi realizations as edge lists");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run a named range check and emit a JSON report");
  verify->add_option("check", va.check, "delta | delta2 | pnorm | selberg | legendre | cms | heath-brown | maxgap | pittel | state")
      ->required();
  verify->add_option("--from", va.from);
  verify->add_option("--to", va.to);
  verify->add_option("--x", va.xs, "Grid of x values");
  verify->add_option("--N", va.ns, "Grid of N values (selberg)");
  verify->add_option("--constant", va.constant)->capture_default_str();
  verify->add_option("--compare-constant", va.compare_constant)->capture_default_str();
  verify->add_option("--m", va.m, "pittel: partitions of 2m")->capture_default_str();
  verify->add_option("--samples", va.samples)->capture_default_str();
  verify->add_option("--state", va.state, "Checkpoint to check (verify state)");
  verify->add_option("--report", va.report, "Also write the JSON report here");

  ExportArgs ea;
  auto* exp = app.add_subcommand("export", "Convert a checkpoint or graph file");
  exp->add_option("--in", ea.in, "Checkpoint (.pgck), graph JSON (.json) or edge list (.edges/.txt)")->required();
  exp->add_option("--format", ea.format, "json | edges | dot")->capture_default_str();
  exp->add_option("--out", ea.out);

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Time sieve, growth and a scan");
  bench->add_option("--n", ba.n)->capture_default_str();
  bench->add_option("--scan-to", ba.scan_to)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*grow) return cmd_grow(common, ga);
    if (*check) return cmd_check(common, ca);
    if (*verify) return cmd_verify(common, va);
    if (*exp) return cmd_export(common, ea);
    if (*bench) return cmd_bench(common, ba);
  } catch (const pg::RangeError& e) {
    std::cerr << "range error: " << e.what() << '\n';
    return 2;
  } catch (const pg::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return 2;
  } catch (const pg::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const pg::SizeError& e) {
    std::cerr << "size error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
