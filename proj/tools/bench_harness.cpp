#include "bench_harness.hpp"

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "pdnsa/filter.hpp"
#include "pdnsa/ingest.hpp"
#include "pdnsa/stats.hpp"
#include "pdnsa/tunnelgen.hpp"

namespace pdnsa::bench {

double BenchResult::bytes_per_key() const {
  const std::size_t keys = distinct_slds + dedup_keys;
  return keys ? static_cast<double>(peak_rss_kb) * 1024.0 / static_cast<double>(keys) : 0.0;
}

std::string BenchResult::to_text() const {
  std::ostringstream out;
  out << "entries " << entries << "\n"
      << "seconds " << seconds << "\n"
      << "entries_per_second " << (seconds > 0 ? static_cast<double>(entries) / seconds : 0.0) << "\n"
      << "peak_rss_kb " << peak_rss_kb << "\n"
      << "distinct_slds " << distinct_slds << "\n"
      << "dedup_keys " << dedup_keys << "\n"
      << "dedup_bytes " << dedup_bytes << "\n"
      << "bytes_per_key " << bytes_per_key() << "\n"
      << "candidates " << candidates << "\n"
      << "dropped_known_tunnels " << dropped_known_tunnels << "\n";
  return out.str();
}

BenchResult run_stream_bench(const BenchOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Classifier classifier(ProfileSet::load(o.profiles.empty() ? ProfileSet::default_path() : o.profiles));

  std::vector<LabeledEntry> planted;
  if (o.tunnels > 0) planted = generate(mixed_corpus(o.seed, o.tunnels, 10));
  const std::uint64_t bulk = o.entries > planted.size() ? o.entries - planted.size() : 0;
  const std::uint64_t stride = planted.empty() ? 0 : std::max<std::uint64_t>(1, bulk / planted.size());
  ShapedGenerator shaped(o.seed, bulk);

  FirstSeenState seen = FirstSeenState::exact();
  StatsBundle stats;
  Pipeline pipeline(FilterConfig{}, &classifier);
  const SldResolver resolver;

  BenchResult r;
  std::string line;
  PdnsEntry generated, parsed;
  std::size_t next_planted = 0;
  for (std::uint64_t i = 0;; ++i) {
    const PdnsEntry* src = nullptr;
    if (next_planted < planted.size() && (stride == 0 || i % (stride + 1) == stride)) {
      src = &planted[next_planted++].entry;
    } else if (shaped.next(generated)) {
      src = &generated;
    } else if (next_planted < planted.size()) {
      src = &planted[next_planted++].entry;
    } else {
      break;
    }
    line = to_ndjson(*src);
    if (parse_ndjson_record(line, parsed)) continue;
    if (!seen.check_and_insert(dedup_key(parsed, DedupKey::Rrname))) continue;
    const Fqdn sld = resolver.resolve(parsed).sld;
    stats.accumulate(parsed, sld);
    pipeline.consume(parsed, sld);
    ++r.entries;
  }
  const CandidateReport report = pipeline.finish();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  r.peak_rss_kb = ru.ru_maxrss;
  r.distinct_slds = stats.slds().size();
  r.dedup_keys = seen.size();
  r.dedup_bytes = seen.memory_bytes();
  r.candidates = report.candidates.size();
  r.dropped_known_tunnels = report.dropped_known_tunnels.size();
  return r;
}

namespace {

BenchResult parse_result(const std::string& text) {
  BenchResult r;
  std::istringstream in(text);
  std::string key;
  double v = 0;
  while (in >> key >> v) {
    if (key == "entries") r.entries = static_cast<std::uint64_t>(v);
    if (key == "seconds") r.seconds = v;
    if (key == "distinct_slds") r.distinct_slds = static_cast<std::size_t>(v);
    if (key == "dedup_keys") r.dedup_keys = static_cast<std::size_t>(v);
    if (key == "dedup_bytes") r.dedup_bytes = static_cast<std::size_t>(v);
    if (key == "candidates") r.candidates = static_cast<std::size_t>(v);
    if (key == "dropped_known_tunnels") r.dropped_known_tunnels = static_cast<std::size_t>(v);
  }
  return r;
}

}  // namespace

BenchResult run_stream_bench_isolated(const BenchOptions& o) {
  int fds[2];
  if (pipe(fds) != 0) throw std::runtime_error("pipe failed");
  const pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    close(fds[0]);
    int code = 0;
    try {
      const std::string text = run_stream_bench(o).to_text();
      if (write(fds[1], text.data(), text.size()) != static_cast<ssize_t>(text.size())) code = 1;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "benchmark failed: %s\n", e.what());
      code = 1;
    }
    close(fds[1]);
    _exit(code);
  }
  close(fds[1]);
  std::string text;
  char buf[4096];
  for (ssize_t n; (n = read(fds[0], buf, sizeof buf)) > 0;) text.append(buf, static_cast<std::size_t>(n));
  close(fds[0]);
  int status = 0;
  rusage ru{};
  if (wait4(pid, &status, 0, &ru) != pid || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw std::runtime_error("benchmark child failed");
  }
  BenchResult r = parse_result(text);
  r.peak_rss_kb = ru.ru_maxrss;
  return r;
}

}  // namespace pdnsa::bench
