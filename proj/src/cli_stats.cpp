#include "cli_common.hpp"
#include "pdnsa/cli.hpp"

namespace pdnsa::cli {
namespace {

struct StatsSink final : ShardSink {
  StatsBundle bundle;
  void consume(const PdnsEntry& e, const Fqdn& sld) override { bundle.accumulate(e, sld); }
};

}  // namespace

int cmd_stats(const InputOptions& in, const std::string& out_dir, std::size_t top_n, Streams io) {
  const auto psl = load_psl(in);
  std::vector<StatsSink> sinks(in.shards);
  std::vector<ShardSink*> ptrs;
  for (auto& s : sinks) ptrs.push_back(&s);
  const IngestSummary summary = run_sharded(in, ptrs, psl ? &*psl : nullptr);

  StatsBundle bundle = std::move(sinks[0].bundle);
  for (std::size_t i = 1; i < sinks.size(); ++i) bundle.merge(sinks[i].bundle);

  print_ingest(summary, io.err);
  if (bundle.empty()) io.err << "warning: no entries accepted; tables contain headers only\n";
  for (const auto& path : write_stats(bundle, out_dir, top_n)) io.out << path << "\n";
  return kExitOk;
}

}  // namespace pdnsa::cli
