#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pdnsa/entry.hpp"
#include "pdnsa/fingerprint.hpp"
#include "pdnsa/hashing.hpp"
#include "pdnsa/ingest.hpp"

namespace pdnsa {

class PublicSuffixList;

/// Normalized SLD set read from one-per-line files with `#` comments.
class DomainSet {
 public:
  DomainSet() = default;
  DomainSet(std::initializer_list<std::string_view> names);

  static DomainSet load(const std::string& path);  // throws IoError, ConfigError
  static DomainSet parse(std::istream& in);        // throws ConfigError

  void insert(std::string_view name);  // normalizes; throws ConfigError on bad names
  bool contains(const std::string& normalized) const { return names_.count(normalized) > 0; }
  bool empty() const { return names_.empty(); }
  std::size_t size() const { return names_.size(); }
  std::vector<std::string> sorted() const;

 private:
  std::unordered_set<std::string> names_;
};

/// The three-character provider tunnel domains known to carry bulk tunnel traffic.
const DomainSet& default_known_tunnels();

struct KnownLists {
  DomainSet cdn_domains;
  DomainSet known_tunnel_domains = default_known_tunnels();
  /// IOC domains: never dropped, reported instead.
  DomainSet watchlist;

  void validate() const;  // throws ConfigError when the sets overlap
};

struct SpecialUseRules {
  bool arpa = true;         // reverse-DNS and other infrastructure names
  bool auth_labels = true;  // _dmarc, _domainkey, _spf labels
  bool txt_policy = true;   // TXT rdata starting with v=spf1 / v=DKIM1 / v=DMARC1
};

struct PostFilters {
  bool drop_daily_seen = false;
  bool drop_single_entry = false;
  bool drop_alexa_top = false;
  DomainSet alexa;
  /// Days in the observation window; defaults to the calendar days spanned
  /// by the input.
  std::optional<std::size_t> observation_days;
};

struct FilterConfig {
  std::set<RRType> prefilter_types{RRType::Kind::Null, RRType::Kind::TXT};
  KnownLists known;
  std::size_t min_level = 4;
  std::size_t min_distinct_fqdns = 2;
  SpecialUseRules special_use;
  PostFilters post;

  void validate() const;  // throws ConfigError
};

// Per-entry predicates. True means the entry survives.
bool pass_rrtype(const PdnsEntry& e, const std::set<RRType>& types);
bool pass_known_domains(const Fqdn& sld, const KnownLists& lists);
bool pass_min_level(const PdnsEntry& e, std::size_t min_level);
bool is_special_use(const PdnsEntry& e, const SpecialUseRules& rules);

/// Stages in execution order; labels keep the conventional numbering.
enum class Stage : std::uint8_t { RRType, KnownDomains, MinLevel, SpecialUse, MinSubdomains };
inline constexpr std::size_t kStageCount = 5;
std::string_view stage_name(Stage s);

std::string_view stage_id(Stage s);  // "0", "1", "2", "4", "3"

struct StageCount {
  std::string id;
  std::string name;
  std::uint64_t entries_in = 0;
  std::uint64_t entries_out = 0;
  std::uint64_t slds_out = 0;
  friend bool operator==(const StageCount&, const StageCount&) = default;
};

inline constexpr std::size_t kMaxSamples = 10;

struct Candidate {
  std::string sld;
  std::uint64_t distinct_fqdns = 0;
  std::uint64_t entries = 0;
  std::uint64_t days_seen = 0;
  std::string first_day;
  std::string last_day;
  std::map<std::string, std::uint64_t> rrtype_mix;
  std::string dominant_bailiwick;
  /// Lexicographically smallest rrnames, at most kMaxSamples.
  std::vector<std::string> samples;
  bool watchlist = false;
  std::optional<SldAttribution> attribution;
  /// Set on post-filtered SLDs: daily_seen, single_entry or alexa.
  std::string post_filter;
};

struct WatchlistHit {
  std::string sld;
  std::uint64_t entries = 0;
  std::map<std::string, std::uint64_t> rrtype_mix;
  bool candidate = false;
};

struct CandidateReport {
  std::vector<StageCount> stages;
  /// Entries desc, then name.
  std::vector<Candidate> candidates;
  std::vector<Candidate> post_filtered;
  /// (SLD, entries) dropped as known tunnels, entries desc then name.
  std::vector<std::pair<std::string, std::uint64_t>> dropped_known_tunnels;
  std::vector<WatchlistHit> watchlist_hits;
  std::uint64_t total_entries = 0;
  std::string first_day;
  std::string last_day;
  std::uint64_t observation_days = 0;

  std::vector<std::string> candidate_slds() const;
  const Candidate* find(const std::string& sld) const;
};

/// Streaming implementation of the whole reduction. Entries are fed one at a
/// time; only per-SLD aggregates of entries that survive the per-entry
/// stages are retained. Pipelines over disjoint shards merge exactly.
class Pipeline {
 public:
  explicit Pipeline(FilterConfig config, const Classifier* classifier = nullptr,
                    const PublicSuffixList* psl = nullptr);

  void consume(const PdnsEntry& e);
  void consume(const PdnsEntry& e, const Fqdn& sld);
  void merge(const Pipeline& other);
  CandidateReport finish() const;

  const FilterConfig& config() const { return config_; }

 private:
  struct Group {
    FingerprintSet fqdns;
    std::uint64_t entries = 0;
    std::set<Day> days;
    std::map<RRType, std::uint64_t> types;
    std::map<std::string, std::uint64_t> bailiwicks;
    std::vector<std::string> samples;
    SldVote vote;
    void add_sample(const std::string& name);
    void merge(const Group& o);
  };
  struct Watch {
    std::uint64_t entries = 0;
    std::map<RRType, std::uint64_t> types;
  };

  FilterConfig config_;
  const Classifier* classifier_;
  SldResolver resolver_;
  std::uint64_t total_ = 0;
  std::optional<Day> first_day_, last_day_;
  /// entries_out per per-entry stage, in execution order.
  std::array<std::uint64_t, kStageCount - 1> passed_{};
  std::array<FingerprintSet, kStageCount - 1> slds_passed_;
  std::unordered_map<std::string, Group> groups_;
  std::map<std::string, std::uint64_t> dropped_known_;
  std::map<std::string, Watch> watch_;
};

CandidateReport run_pipeline(EntrySource& source, const FilterConfig& config,
                             const Classifier* classifier = nullptr);
CandidateReport run_pipeline(const std::vector<PdnsEntry>& entries, const FilterConfig& config,
                             const Classifier* classifier = nullptr);

// Batch forms of the individual stages, for tests and small inputs.
std::vector<PdnsEntry> prefilter_rrtype(const std::vector<PdnsEntry>& in, const std::set<RRType>& types);
std::vector<PdnsEntry> filter_known_domains(const std::vector<PdnsEntry>& in, const KnownLists& lists,
                                            std::map<std::string, std::uint64_t>* dropped_known = nullptr);
std::vector<PdnsEntry> filter_min_level(const std::vector<PdnsEntry>& in, std::size_t min_level);
std::vector<PdnsEntry> filter_special_use(const std::vector<PdnsEntry>& in, const SpecialUseRules& rules);
/// Keeps entries of SLDs with at least `min_distinct` distinct rrnames.
std::vector<PdnsEntry> filter_min_subdomains(const std::vector<PdnsEntry>& in, std::size_t min_distinct,
                                             std::set<std::string>* kept_slds = nullptr);

// Report serialization.
std::string report_json(const CandidateReport& r);
CandidateReport report_from_json(const std::string& text);  // throws ConfigError
std::string report_text(const CandidateReport& r);
/// stage,name,entries_in,entries_out,slds_out
std::string stages_csv(const CandidateReport& r);
/// sld,implementation,agreement,entries
std::string attribution_csv(const CandidateReport& r);

}  // namespace pdnsa
