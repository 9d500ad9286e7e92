#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pdnsa/filter.hpp"
#include "pdnsa/fingerprint.hpp"
#include "pdnsa/ingest.hpp"
#include "pdnsa/public_suffix.hpp"
#include "pdnsa/stats.hpp"

namespace pdnsa::cli {

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

/// Options shared by every subcommand that reads a corpus.
struct InputOptions {
  std::vector<std::string> paths;
  std::string format = "auto";
  std::string dedup = "off";  // off | exact | approx
  std::string dedup_key = "rrname";
  std::size_t dedup_capacity = 0;  // 0: unbounded (exact) / required (approx)
  double dedup_fpr = 0.001;
  std::string psl;
  std::size_t shards = 1;

  void add_to(CLI::App& app);
};

/// What one shard worker hands to a per-entry callback.
struct ShardSink {
  virtual ~ShardSink() = default;
  virtual void consume(const PdnsEntry& e, const Fqdn& sld) = 0;
};

struct IngestSummary {
  IngestStats stats;
  std::uint64_t suffix_mismatch = 0;
};

/// Streams the inputs through `sinks.size()` shard workers. Shards partition
/// by SLD hash, so per-shard aggregates merge into the single-pass result.
IngestSummary run_sharded(const InputOptions& in, const std::vector<ShardSink*>& sinks,
                          const PublicSuffixList* psl);

std::optional<PublicSuffixList> load_psl(const InputOptions& in);

/// The `--config` JSON document, or an empty object.
nlohmann::json load_config_file(const std::string& path);

/// Filter and classifier flags. Values are applied over the config file
/// only when given on the command line.
struct FilterOptions {
  std::string config_path;
  std::vector<std::string> prefilter_types;
  std::string cdn_domains, known_tunnel_domains, watchlist, alexa;
  std::size_t min_level = 0, min_distinct_fqdns = 0, observation_days = 0;
  bool no_arpa = false, no_auth_labels = false, no_txt_policy = false;
  bool drop_daily_seen = false, drop_single_entry = false;

  CLI::Option* o_types = nullptr;
  CLI::Option* o_min_level = nullptr;
  CLI::Option* o_min_distinct = nullptr;
  CLI::Option* o_observation_days = nullptr;

  void add_to(CLI::App& app);
  /// defaults < config file < flags
  FilterConfig resolve(const nlohmann::json& file) const;
};

struct ClassifierFlags {
  std::string profiles;
  std::size_t threshold = kDefaultMatchThreshold;
  double encoding_ratio = kDefaultEncodingRatio;
  CLI::Option* o_threshold = nullptr;
  CLI::Option* o_ratio = nullptr;

  void add_to(CLI::App& app);
  Classifier build(const nlohmann::json& file) const;
};

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);
void print_ingest(const IngestSummary& s, std::ostream& err);

int cmd_stats(const InputOptions& in, const std::string& out_dir, std::size_t top_n, Streams io);
int cmd_filter(const InputOptions& in, const FilterOptions& f, const ClassifierFlags& c, bool classify,
               const std::string& out_dir, Streams io);
int cmd_classify(const InputOptions& in, const ClassifierFlags& c, const std::string& config_path,
                 const std::string& labels, const std::string& candidates, const std::string& out_dir, Streams io);

struct GenOptions {
  std::string preset = "mixed";
  std::string config_path;
  std::uint64_t seed = 1;
  std::size_t per_profile = 10000;
  std::size_t tunnels = 20;
  std::size_t benign_per_class = 10;
  std::size_t days = 7;
  std::uint64_t total = 100000;
  std::string out_dir = ".";
  bool gzip = false;
};
int cmd_gen(const GenOptions& g, Streams io);

int cmd_report(const std::string& stats_path, const std::string& candidates_path, const std::string& out_path,
               std::size_t top_n, Streams io);

int cmd_profiles(std::uint64_t seed, std::size_t samples, const std::string& out_path, Streams io);

}  // namespace pdnsa::cli
