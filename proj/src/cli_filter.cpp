#include <filesystem>

#include "cli_common.hpp"
#include "pdnsa/cli.hpp"
#include "pdnsa/error.hpp"

namespace pdnsa::cli {
namespace {

struct FilterSink final : ShardSink {
  Pipeline pipeline;
  FilterSink(const FilterConfig& c, const Classifier* cls) : pipeline(c, cls) {}
  void consume(const PdnsEntry& e, const Fqdn& sld) override { pipeline.consume(e, sld); }
};

}  // namespace

int cmd_filter(const InputOptions& in, const FilterOptions& f, const ClassifierFlags& c, bool classify,
               const std::string& out_dir, Streams io) {
  const auto file = load_config_file(f.config_path);
  const FilterConfig config = f.resolve(file);
  std::optional<Classifier> classifier;
  if (classify) classifier.emplace(c.build(file));
  const auto psl = load_psl(in);

  std::vector<FilterSink> sinks;
  sinks.reserve(in.shards);
  for (std::size_t i = 0; i < in.shards; ++i) sinks.emplace_back(config, classifier ? &*classifier : nullptr);
  std::vector<ShardSink*> ptrs;
  for (auto& s : sinks) ptrs.push_back(&s);
  const IngestSummary summary = run_sharded(in, ptrs, psl ? &*psl : nullptr);
  for (std::size_t i = 1; i < sinks.size(); ++i) sinks[0].pipeline.merge(sinks[i].pipeline);
  const CandidateReport report = sinks[0].pipeline.finish();

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  const auto path = [&](const char* name) { return (std::filesystem::path(out_dir) / name).string(); };
  write_file(path("candidates.json"), report_json(report));
  write_file(path("candidates.txt"), report_text(report));
  write_file(path("stages.csv"), stages_csv(report));
  if (classifier) write_file(path("attribution.csv"), attribution_csv(report));

  print_ingest(summary, io.err);
  io.err << report.candidates.size() << " candidate SLDs, " << report.dropped_known_tunnels.size()
         << " known tunnel SLDs dropped\n";
  for (const char* name : {"candidates.json", "candidates.txt", "stages.csv", "attribution.csv"}) {
    if (classifier || std::string_view(name) != "attribution.csv") io.out << path(name) << "\n";
  }
  return kExitOk;
}

}  // namespace pdnsa::cli
