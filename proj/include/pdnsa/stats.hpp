#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pdnsa/entry.hpp"
#include "pdnsa/hashing.hpp"

namespace pdnsa {

/// rdata size classes: <= 100 bytes, 101-1000 bytes, > 1000 bytes.
enum class RdataBucket : std::uint8_t { Small, Medium, Large };
inline constexpr std::size_t kRdataBuckets = 3;

RdataBucket rdata_bucket(std::size_t serialized_size);
std::string_view to_string(RdataBucket b);

using BucketCounts = std::array<std::uint64_t, kRdataBuckets>;

/// Per (SLD, rrtype) aggregate.
struct SldTypeStats {
  std::uint64_t entries = 0;
  FingerprintSet fqdns;
  std::uint64_t rdata_size_sum = 0;
  std::uint64_t rdata_size_sq_sum = 0;

  void merge(const SldTypeStats& o);
  friend bool operator==(const SldTypeStats&, const SldTypeStats&) = default;
};

struct SldStats {
  std::map<RRType, SldTypeStats> by_type;
  std::map<Day, std::uint64_t> per_day;

  std::uint64_t entries() const;
  /// Distinct rrnames across all types.
  std::size_t distinct_fqdns() const;
  void merge(const SldStats& o);
  friend bool operator==(const SldStats&, const SldStats&) = default;
};

/// Mergeable aggregate of every measurement over a pDNS stream.
///
/// Counters are exact integers, so a bundle built in one pass equals the
/// merge of bundles built over any partition of the same entries.
class StatsBundle {
 public:
  void accumulate(const PdnsEntry& entry, const Fqdn& sld);
  /// Uses the feed's domain field (or the last two labels) as the SLD.
  void accumulate(const PdnsEntry& entry);
  void merge(const StatsBundle& other);

  std::uint64_t total() const { return total_; }
  bool empty() const { return total_ == 0; }

  const std::map<RRType, std::uint64_t>& rrtype_counts() const { return rrtype_counts_; }
  const std::map<std::pair<Day, RRType>, std::uint64_t>& per_day_rrtype() const { return per_day_rrtype_; }
  const std::map<std::size_t, std::uint64_t>& level_counts() const { return level_counts_; }
  const std::map<std::pair<Day, std::size_t>, std::uint64_t>& level_per_day() const { return level_per_day_; }
  const BucketCounts& bucket_counts() const { return bucket_counts_; }
  const std::map<Day, BucketCounts>& buckets_per_day() const { return buckets_per_day_; }
  const std::map<Day, std::uint64_t>& per_day() const { return per_day_; }
  const std::unordered_map<std::string, SldStats>& slds() const { return slds_; }

  /// Inclusive day range covered by the entries; nullopt when empty.
  std::optional<std::pair<Day, Day>> day_range() const;

  friend bool operator==(const StatsBundle&, const StatsBundle&) = default;

 private:
  std::uint64_t total_ = 0;
  std::map<RRType, std::uint64_t> rrtype_counts_;
  std::map<std::pair<Day, RRType>, std::uint64_t> per_day_rrtype_;
  std::map<std::size_t, std::uint64_t> level_counts_;
  std::map<std::pair<Day, std::size_t>, std::uint64_t> level_per_day_;
  BucketCounts bucket_counts_{};
  std::map<Day, BucketCounts> buckets_per_day_;
  std::map<Day, std::uint64_t> per_day_;
  std::unordered_map<std::string, SldStats> slds_;
};

/// nullopt means all types.
using Scope = std::optional<RRType>;

std::string scope_name(const Scope& scope);

struct ShareRow {
  std::string label;
  std::uint64_t count = 0;
  double share = 0.0;
};

struct ShareTable {
  /// A, AAAA, MX, NS, CNAME, TXT, NULL, Others, always in that order.
  std::vector<ShareRow> rows;
  /// Every observed type, count descending then name.
  std::vector<ShareRow> breakdown;
};

ShareTable rrtype_shares(const StatsBundle& bundle);  // throws EmptyBundle

enum class CdfMeasure { DistinctFqdns, Entries };

struct CdfPoint {
  std::size_t rank = 0;
  double cumulative_share = 0.0;
};

struct CdfSeries {
  Scope scope;
  CdfMeasure measure = CdfMeasure::DistinctFqdns;
  std::vector<CdfPoint> points;
  /// SLD and its mass, in rank order.
  std::vector<std::pair<std::string, std::uint64_t>> ranking;
};

/// SLDs ranked by mass descending (ties by name); throws EmptyBundle when no
/// SLD has entries in scope.
CdfSeries sld_cdf(const StatsBundle& bundle, const Scope& scope = std::nullopt,
                  CdfMeasure measure = CdfMeasure::DistinctFqdns);

struct SldRow {
  std::string sld;
  std::uint64_t entries = 0;
  std::size_t distinct_fqdns = 0;
  double share = 0.0;
};

/// Top `n` SLDs by entry count in scope; share is of the scope's entries.
std::vector<SldRow> top_slds(const StatsBundle& bundle, std::size_t n, const Scope& scope = std::nullopt);

struct DailySeries {
  std::vector<Day> days;
  /// One zero-filled count vector per requested SLD, aligned with `days`.
  std::vector<std::pair<std::string, std::vector<std::uint64_t>>> series;
};

DailySeries daily_series(const StatsBundle& bundle, const std::vector<std::string>& slds);

/// Least-squares slope of y against x = 0, 1, 2, ...; 0 for fewer than two points.
double linear_trend_slope(const std::vector<double>& y);

struct SldRdataRow {
  std::string sld;
  std::uint64_t entries = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
};

/// rdata size mean and spread per SLD in scope, sorted by name.
std::vector<SldRdataRow> sld_rdata_sizes(const StatsBundle& bundle, const Scope& scope = std::nullopt);

// Emitters. Every table is written with a header row even when empty, and
// numbers are printed with fixed precision so output is byte-reproducible.

std::string format_fixed(double v, int digits = 6);

std::string rrtype_shares_csv(const StatsBundle& bundle);
std::string rrtype_breakdown_csv(const StatsBundle& bundle);
std::string rrtype_per_day_csv(const StatsBundle& bundle);
std::string sld_cdf_csv(const StatsBundle& bundle, CdfMeasure measure);
std::string top_slds_csv(const StatsBundle& bundle, std::size_t n);
std::string level_per_day_csv(const StatsBundle& bundle);
std::string rdata_size_per_day_csv(const StatsBundle& bundle);
std::string sld_rdata_csv(const StatsBundle& bundle);
std::string top_daily_csv(const StatsBundle& bundle, std::size_t n);
std::string stats_json(const StatsBundle& bundle, std::size_t top_n);

/// Writes every table above into `dir` (created if needed) and returns the
/// file names written.
std::vector<std::string> write_stats(const StatsBundle& bundle, const std::string& dir, std::size_t top_n = 10);

}  // namespace pdnsa
