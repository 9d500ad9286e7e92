#include "pdnsa/cli.hpp"

#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "cli_common.hpp"
#include "pdnsa/error.hpp"
#include "pdnsa/hashing.hpp"

namespace pdnsa::cli {

using nlohmann::json;

void InputOptions::add_to(CLI::App& app) {
  app.add_option("inputs", paths, "Input files (NDJSON or CSV, optionally gzipped; '-' for stdin)")->required();
  app.add_option("--format", format, "Input format")->check(CLI::IsMember({"auto", "ndjson", "csv"}));
  app.add_option("--dedup", dedup, "First-seen deduplication")->check(CLI::IsMember({"off", "exact", "approx"}));
  app.add_option("--dedup-key", dedup_key, "Deduplication key")
      ->check(CLI::IsMember({"rrname", "rrname-rrtype"}));
  app.add_option("--dedup-capacity", dedup_capacity, "Key capacity (exact: hard limit, approx: sizing)");
  app.add_option("--dedup-fpr", dedup_fpr, "False-positive rate of the approximate deduplicator");
  app.add_option("--psl", psl, "Public suffix list, used when an entry has no usable domain field");
  app.add_option("--shards", shards, "Parallel shard workers")->check(CLI::Range(1, 256));
}

std::optional<PublicSuffixList> load_psl(const InputOptions& in) {
  if (in.psl.empty()) return std::nullopt;
  return PublicSuffixList::load(in.psl);
}

namespace {

FirstSeenState make_state(const InputOptions& in) {
  if (in.dedup == "approx") {
    if (in.dedup_capacity == 0) throw ConfigError("--dedup approx needs --dedup-capacity");
    return FirstSeenState::approximate(in.dedup_capacity, in.dedup_fpr);
  }
  return FirstSeenState::exact(in.dedup_capacity ? std::optional<std::size_t>(in.dedup_capacity) : std::nullopt);
}

struct WorkerResult {
  IngestStats ingest;
  std::uint64_t consumed = 0;
  std::uint64_t deduplicated = 0;
  std::uint64_t suffix_mismatch = 0;
};

void run_worker(const InputOptions& in, std::size_t shard, std::size_t shards, ShardSink& sink,
                const PublicSuffixList* psl, WorkerResult& result) {
  Ingest ingest(in.paths, {parse_input_format(in.format), nullptr, DedupKey::Rrname});
  const SldResolver resolver(psl);
  const bool dedup = in.dedup != "off";
  const DedupKey key = in.dedup_key == "rrname" ? DedupKey::Rrname : DedupKey::RrnameRrtype;
  std::optional<FirstSeenState> state;
  if (dedup) state.emplace(make_state(in));
  PdnsEntry e;
  while (ingest.next(e)) {
    const SldResult r = resolver.resolve(e);
    if (shards > 1 && hash64(r.sld.dotted()) % shards != shard) continue;
    if (state && !state->check_and_insert(dedup_key(e, key))) {
      ++result.deduplicated;
      continue;
    }
    result.suffix_mismatch += r.suffix_mismatch;
    ++result.consumed;
    sink.consume(e, r.sld);
  }
  result.ingest = ingest.stats();
}

}  // namespace

IngestSummary run_sharded(const InputOptions& in, const std::vector<ShardSink*>& sinks, const PublicSuffixList* psl) {
  const std::size_t n = sinks.size();
  std::vector<WorkerResult> results(n);
  if (n == 1) {
    run_worker(in, 0, 1, *sinks[0], psl, results[0]);
  } else {
    // Every worker reads the whole input and keeps its own SLDs; the
    // deduplicator is per shard, which is exact because a key's SLD is
    // fixed by the key.
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> threads;
    for (std::size_t k = 0; k < n; ++k) {
      threads.emplace_back([&, k] {
        try {
          run_worker(in, k, n, *sinks[k], psl, results[k]);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  IngestSummary s;
  s.stats = results[0].ingest;
  s.stats.accepted = 0;
  s.stats.deduplicated = 0;
  for (const auto& r : results) {
    s.stats.accepted += r.consumed;
    s.stats.deduplicated += r.deduplicated;
    s.suffix_mismatch += r.suffix_mismatch;
  }
  if (s.suffix_mismatch) s.stats.warnings["suffix_mismatch"] = s.suffix_mismatch;
  return s;
}

json load_config_file(const std::string& path) {
  if (path.empty()) return json::object();
  const json doc = json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ConfigError(path + ": config is not a JSON object");
  return doc;
}

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown config key: " + where + key);
  }
}

template <class T>
T get(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key has the wrong type: ") + key);
  }
}

}  // namespace

void FilterOptions::add_to(CLI::App& app) {
  app.add_option("--config", config_path, "JSON config file (flags take precedence)");
  o_types = app.add_option("--prefilter-types,--types", prefilter_types, "Stage 0 rrtypes (default NULL,TXT)")
                ->delimiter(',');
  app.add_option("--cdn-domains", cdn_domains, "Known CDN SLD list");
  app.add_option("--known-tunnel-domains", known_tunnel_domains, "Known tunnel SLD list (replaces the built-in set)");
  app.add_option("--watchlist", watchlist, "IOC SLD list; never dropped, always reported");
  o_min_level = app.add_option("--min-level", min_level, "Stage 2 minimum FQDN level (default 4)");
  o_min_distinct = app.add_option("--min-distinct-fqdns", min_distinct_fqdns,
                                  "Stage 3 minimum distinct FQDNs per SLD (default 2)");
  app.add_flag("--no-arpa", no_arpa, "Keep .arpa names at stage 4");
  app.add_flag("--no-auth-labels", no_auth_labels, "Keep _dmarc/_domainkey/_spf names at stage 4");
  app.add_flag("--no-txt-policy", no_txt_policy, "Keep SPF/DKIM/DMARC TXT records at stage 4");
  app.add_flag("--drop-daily-seen", drop_daily_seen, "Post-filter SLDs seen on every day of the window");
  app.add_flag("--drop-single-entry", drop_single_entry, "Post-filter SLDs with a single entry");
  app.add_option("--alexa", alexa, "Top-site list; its SLDs are post-filtered");
  o_observation_days = app.add_option("--observation-days", observation_days, "Window length for --drop-daily-seen");
}

FilterConfig FilterOptions::resolve(const json& file) const {
  check_keys(file,
             {"prefilter_types", "cdn_domains", "known_tunnel_domains", "watchlist", "min_level", "min_distinct_fqdns",
              "special_use", "post", "profiles", "threshold", "encoding_ratio"},
             "");
  FilterConfig c;
  auto set_types = [&](const std::vector<std::string>& names) {
    c.prefilter_types.clear();
    for (const auto& t : names) c.prefilter_types.insert(RRType::parse(t));
  };
  if (file.contains("prefilter_types")) set_types(get<std::vector<std::string>>(file, "prefilter_types", {}));
  if (o_types->count()) set_types(prefilter_types);

  auto list = [&](const char* key, const std::string& flag) -> std::string {
    return !flag.empty() ? flag : get<std::string>(file, key, "");
  };
  if (auto p = list("cdn_domains", cdn_domains); !p.empty()) c.known.cdn_domains = DomainSet::load(p);
  if (auto p = list("known_tunnel_domains", known_tunnel_domains); !p.empty()) {
    c.known.known_tunnel_domains = DomainSet::load(p);
  }
  if (auto p = list("watchlist", watchlist); !p.empty()) c.known.watchlist = DomainSet::load(p);

  c.min_level = o_min_level->count() ? min_level : get<std::size_t>(file, "min_level", c.min_level);
  c.min_distinct_fqdns =
      o_min_distinct->count() ? min_distinct_fqdns : get<std::size_t>(file, "min_distinct_fqdns", c.min_distinct_fqdns);

  const json su = file.value("special_use", json::object());
  check_keys(su, {"arpa", "auth_labels", "txt_policy"}, "special_use.");
  c.special_use.arpa = !no_arpa && get<bool>(su, "arpa", true);
  c.special_use.auth_labels = !no_auth_labels && get<bool>(su, "auth_labels", true);
  c.special_use.txt_policy = !no_txt_policy && get<bool>(su, "txt_policy", true);

  const json post = file.value("post", json::object());
  check_keys(post, {"drop_daily_seen", "drop_single_entry", "drop_alexa_top", "alexa", "observation_days"}, "post.");
  c.post.drop_daily_seen = drop_daily_seen || get<bool>(post, "drop_daily_seen", false);
  c.post.drop_single_entry = drop_single_entry || get<bool>(post, "drop_single_entry", false);
  const std::string alexa_path = !alexa.empty() ? alexa : get<std::string>(post, "alexa", "");
  c.post.drop_alexa_top = !alexa.empty() || get<bool>(post, "drop_alexa_top", !alexa_path.empty());
  if (!alexa_path.empty()) c.post.alexa = DomainSet::load(alexa_path);
  if (o_observation_days->count()) {
    c.post.observation_days = observation_days;
  } else if (post.contains("observation_days")) {
    c.post.observation_days = get<std::size_t>(post, "observation_days", 0);
  }
  c.validate();
  return c;
}

void ClassifierFlags::add_to(CLI::App& app) {
  app.add_option("--profiles", profiles, "Implementation profile file (default $PDNSA_PROFILES or the shipped file)");
  o_threshold = app.add_option("--threshold", threshold, "Attributes that must match (of 8)");
  o_ratio = app.add_option("--encoding-ratio", encoding_ratio, "Alphabet share needed for hex/base32");
}

Classifier ClassifierFlags::build(const json& file) const {
  const std::string path =
      !profiles.empty() ? profiles : get<std::string>(file, "profiles", ProfileSet::default_path());
  ClassifierOptions o;
  o.threshold = o_threshold->count() ? threshold : get<std::size_t>(file, "threshold", o.threshold);
  o.encoding_ratio = o_ratio->count() ? encoding_ratio : get<double>(file, "encoding_ratio", o.encoding_ratio);
  return Classifier(ProfileSet::load(path), o);
}

void write_file(const std::string& path, const std::string& content) {
  LineWriter w(path);
  w.write(content);
  w.close();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void print_ingest(const IngestSummary& s, std::ostream& err) {
  err << "read " << s.stats.read << ", accepted " << s.stats.accepted << ", rejected " << s.stats.rejected()
      << ", deduplicated " << s.stats.deduplicated << "\n";
  for (const auto& [kind, n] : s.stats.rejected_by_error) err << "  rejected " << kind << ": " << n << "\n";
  for (const auto& [kind, n] : s.stats.warnings) err << "  warning " << kind << ": " << n << "\n";
}

}  // namespace pdnsa::cli

namespace pdnsa {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli;
  CLI::App app{"Passive DNS analysis: statistics, tunnel candidate filtering and implementation fingerprinting"};
  app.name("pdnsa");
  app.require_subcommand(1, 1);

  InputOptions stats_in;
  std::string stats_out = "stats";
  std::size_t top_n = 10;
  auto* stats = app.add_subcommand("stats", "Record-type shares, SLD concentration and per-day series");
  stats_in.add_to(*stats);
  stats->add_option("-o,--out", stats_out, "Output directory");
  stats->add_option("--top", top_n, "Top-N SLDs");

  InputOptions filter_in;
  FilterOptions filter_opts;
  ClassifierFlags filter_cls;
  bool no_classify = false;
  std::string filter_out = "filter";
  auto* filter = app.add_subcommand("filter", "Reduce a corpus to tunnel candidate SLDs");
  filter_in.add_to(*filter);
  filter_opts.add_to(*filter);
  filter_cls.add_to(*filter);
  filter->add_flag("--no-classify", no_classify, "Skip implementation attribution");
  filter->add_option("-o,--out", filter_out, "Output directory");

  InputOptions cls_in;
  ClassifierFlags cls_opts;
  std::string cls_config, labels, candidates, cls_out = "classify";
  auto* classify = app.add_subcommand("classify", "Attribute entries to tunnel implementations");
  cls_in.add_to(*classify);
  cls_opts.add_to(*classify);
  classify->add_option("--config", cls_config, "JSON config file");
  classify->add_option("--labels", labels, "Labels sidecar; adds a confusion matrix");
  classify->add_option("--candidates", candidates, "candidates.json; restricts attribution to its SLDs");
  classify->add_option("-o,--out", cls_out, "Output directory");

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen", "Generate a labeled synthetic corpus");
  gen->add_option("--preset", gen_opts.preset, "Corpus preset")
      ->check(CLI::IsMember({"classifier", "mixed", "provider", "shaped"}));
  gen->add_option("--config", gen_opts.config_path, "Generator config JSON (overrides --preset)");
  gen->add_option("--seed", gen_opts.seed, "Seed");
  gen->add_option("--per-profile", gen_opts.per_profile, "classifier: entries per implementation");
  gen->add_option("--tunnels", gen_opts.tunnels, "mixed: planted tunnel SLDs");
  gen->add_option("--benign-per-class", gen_opts.benign_per_class, "mixed: benign SLDs per class");
  gen->add_option("--days", gen_opts.days, "Observation window in days")->check(CLI::PositiveNumber);
  gen->add_option("--total", gen_opts.total, "shaped: number of entries");
  gen->add_option("-o,--out", gen_opts.out_dir, "Output directory");
  gen->add_flag("--gzip", gen_opts.gzip, "Write corpus.ndjson.gz");

  std::string report_dir, report_stats, report_cands, report_out = "-";
  std::size_t report_top = 10;
  auto* report = app.add_subcommand("report", "Combined human-readable summary");
  report->add_option("dir", report_dir, "Directory holding stats.json and candidates.json");
  report->add_option("--stats", report_stats, "stats.json path");
  report->add_option("--candidates", report_cands, "candidates.json path");
  report->add_option("-o,--out", report_out, "Output file ('-' for stdout)");
  report->add_option("--top", report_top, "Top-N SLDs");

  std::uint64_t prof_seed = 1;
  std::size_t prof_samples = 20000;
  std::string prof_out = "-";
  auto* profiles = app.add_subcommand("profiles", "Derive implementation profiles from generated traffic");
  profiles->add_option("--seed", prof_seed, "Seed");
  profiles->add_option("--samples", prof_samples, "Samples per implementation");
  profiles->add_option("-o,--out", prof_out, "Output file ('-' for stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "pdnsa: " << e.what() << "\n";
    if (!app.get_subcommands().empty()) err << "run with --help for usage\n";
    return kExitUsage;
  }

  const Streams io{out, err};
  try {
    if (stats->parsed()) return cmd_stats(stats_in, stats_out, top_n, io);
    if (filter->parsed()) return cmd_filter(filter_in, filter_opts, filter_cls, !no_classify, filter_out, io);
    if (classify->parsed()) return cmd_classify(cls_in, cls_opts, cls_config, labels, candidates, cls_out, io);
    if (gen->parsed()) return cmd_gen(gen_opts, io);
    if (report->parsed()) {
      if (report_stats.empty()) report_stats = (report_dir.empty() ? std::string(".") : report_dir) + "/stats.json";
      if (report_cands.empty()) {
        report_cands = (report_dir.empty() ? std::string(".") : report_dir) + "/candidates.json";
      }
      return cmd_report(report_stats, report_cands, report_out, report_top, io);
    }
    if (profiles->parsed()) return cmd_profiles(prof_seed, prof_samples, prof_out, io);
  } catch (const IoError& e) {
    err << "pdnsa: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    err << "pdnsa: invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnknownProfile& e) {
    err << "pdnsa: invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CapacityExceeded& e) {
    err << "pdnsa: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "pdnsa: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace pdnsa
