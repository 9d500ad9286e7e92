#pragma once

#include <cstdint>
#include <string>

namespace pdnsa::bench {

struct BenchOptions {
  std::uint64_t entries = 10'000'000;
  std::uint64_t seed = 1;
  /// Planted tunnel traffic mixed in, so the late filter stages see work.
  std::size_t tunnels = 20;
  std::string profiles;  // empty: shipped profile file
};

struct BenchResult {
  std::uint64_t entries = 0;
  double seconds = 0.0;
  long peak_rss_kb = 0;
  std::size_t distinct_slds = 0;
  std::size_t dedup_keys = 0;
  std::size_t dedup_bytes = 0;
  std::size_t candidates = 0;
  std::size_t dropped_known_tunnels = 0;

  /// Peak RSS per retained key (distinct SLDs plus dedup keys).
  double bytes_per_key() const;
  std::string to_text() const;
};

/// generate -> NDJSON line -> parse -> exact first-seen -> stats + filter,
/// all in-process and streaming.
BenchResult run_stream_bench(const BenchOptions& options);

/// Same, in a forked child so peak RSS covers the benchmark alone.
BenchResult run_stream_bench_isolated(const BenchOptions& options);  // throws std::runtime_error

}  // namespace pdnsa::bench
