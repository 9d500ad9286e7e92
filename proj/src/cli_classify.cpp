#include <algorithm>
#include <filesystem>
#include <set>
#include <unordered_map>

#include "cli_common.hpp"
#include "pdnsa/cli.hpp"
#include "pdnsa/error.hpp"
#include "pdnsa/tunnelgen.hpp"

namespace pdnsa::cli {
namespace {

struct ClassifySink final : ShardSink {
  const Classifier& classifier;
  const std::unordered_map<std::string, std::string>* truth;
  const std::set<std::string>* only;
  std::map<std::string, SldVote> votes;
  ConfusionMatrix matrix;
  std::uint64_t unlabeled = 0;

  ClassifySink(const Classifier& c, const std::unordered_map<std::string, std::string>* t,
               const std::set<std::string>* o)
      : classifier(c), truth(t), only(o) {}

  void consume(const PdnsEntry& e, const Fqdn& sld) override {
    if (only && !only->count(sld.dotted())) return;
    const Attribution a = classifier.classify(e, sld);
    votes[sld.dotted()].add(a);
    if (!truth) return;
    const auto it = truth->find(e.rrname.dotted());
    if (it == truth->end()) {
      ++unlabeled;
      return;
    }
    matrix.add(it->second, a.implementation);
  }
};

}  // namespace

int cmd_classify(const InputOptions& in, const ClassifierFlags& c, const std::string& config_path,
                 const std::string& labels, const std::string& candidates, const std::string& out_dir, Streams io) {
  const Classifier classifier = c.build(load_config_file(config_path));
  const auto psl = load_psl(in);

  std::optional<std::unordered_map<std::string, std::string>> truth;
  if (!labels.empty()) {
    truth.emplace();
    // Benign traffic should come out as unknown.
    for (auto& [rrname, label] : read_labels(labels)) {
      (*truth)[Fqdn::parse(rrname).dotted()] =
          label.kind == Label::Kind::Tunnel ? label.cls : std::string(kUnknown);
    }
  }
  std::optional<std::set<std::string>> only;
  if (!candidates.empty()) {
    const auto slds = report_from_json(read_file(candidates)).candidate_slds();
    only.emplace(slds.begin(), slds.end());
  }

  std::vector<ClassifySink> sinks;
  sinks.reserve(in.shards);
  for (std::size_t i = 0; i < in.shards; ++i) {
    sinks.emplace_back(classifier, truth ? &*truth : nullptr, only ? &*only : nullptr);
  }
  std::vector<ShardSink*> ptrs;
  for (auto& s : sinks) ptrs.push_back(&s);
  const IngestSummary summary = run_sharded(in, ptrs, psl ? &*psl : nullptr);

  std::map<std::string, SldVote> votes;
  ConfusionMatrix matrix;
  std::uint64_t unlabeled = 0;
  for (auto& s : sinks) {
    for (auto& [sld, v] : s.votes) votes[sld].merge(v);
    matrix.merge(s.matrix);
    unlabeled += s.unlabeled;
  }

  std::vector<std::string> order;
  for (const auto& p : classifier.profiles().profiles()) order.push_back(p.name);
  std::vector<std::pair<std::string, SldAttribution>> rows;
  for (const auto& [sld, v] : votes) rows.emplace_back(sld, v.result(order));
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.second.entries != b.second.entries ? a.second.entries > b.second.entries : a.first < b.first;
  });
  std::string csv = "sld,implementation,agreement,entries\n";
  for (const auto& [sld, a] : rows) {
    csv += sld + ',' + a.implementation + ',' + format_fixed(a.fraction, 4) + ',' + std::to_string(a.entries) + '\n';
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  const auto path = [&](const char* name) { return (std::filesystem::path(out_dir) / name).string(); };
  write_file(path("attribution.csv"), csv);
  print_ingest(summary, io.err);
  io.out << path("attribution.csv") << "\n";
  if (truth) {
    write_file(path("confusion.csv"), matrix.to_csv());
    io.out << path("confusion.csv") << "\n";
    io.out << "accuracy " << format_fixed(matrix.accuracy(), 4) << " (" << matrix.correct() << "/" << matrix.total()
           << ")\n";
    for (const auto& [cls, counts] : matrix.per_class()) {
      io.out << "  " << cls << " " << counts.first << "/" << counts.second << "\n";
    }
    if (unlabeled) io.err << "warning: " << unlabeled << " entries have no label\n";
  }
  return kExitOk;
}

}  // namespace pdnsa::cli
