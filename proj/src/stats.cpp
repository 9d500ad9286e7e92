#include "pdnsa/stats.hpp"

#include <algorithm>
#include <cmath>

#include "pdnsa/error.hpp"

namespace pdnsa {

RdataBucket rdata_bucket(std::size_t size) {
  if (size <= 100) return RdataBucket::Small;
  if (size <= 1000) return RdataBucket::Medium;
  return RdataBucket::Large;
}

std::string_view to_string(RdataBucket b) {
  switch (b) {
    case RdataBucket::Small: return "le100";
    case RdataBucket::Medium: return "101-1000";
    case RdataBucket::Large: return "gt1000";
  }
  return "?";
}

void SldTypeStats::merge(const SldTypeStats& o) {
  entries += o.entries;
  fqdns.merge(o.fqdns);
  rdata_size_sum += o.rdata_size_sum;
  rdata_size_sq_sum += o.rdata_size_sq_sum;
}

std::uint64_t SldStats::entries() const {
  std::uint64_t n = 0;
  for (const auto& [_, t] : by_type) n += t.entries;
  return n;
}

std::size_t SldStats::distinct_fqdns() const {
  if (by_type.size() == 1) return by_type.begin()->second.fqdns.size();
  FingerprintSet all;
  for (const auto& [_, t] : by_type) all.merge(t.fqdns);
  return all.size();
}

void SldStats::merge(const SldStats& o) {
  for (const auto& [type, t] : o.by_type) by_type[type].merge(t);
  for (const auto& [day, n] : o.per_day) per_day[day] += n;
}

void StatsBundle::accumulate(const PdnsEntry& entry, const Fqdn& sld) {
  const Day day = day_of(entry.time_seen);
  const std::size_t lvl = entry.rrname.level();
  const std::size_t size = rdata_serialized_size(entry.rdata);
  const auto bucket = static_cast<std::size_t>(rdata_bucket(size));

  ++total_;
  ++rrtype_counts_[entry.rrtype];
  ++per_day_rrtype_[{day, entry.rrtype}];
  ++level_counts_[lvl];
  ++level_per_day_[{day, lvl}];
  ++bucket_counts_[bucket];
  ++buckets_per_day_[day][bucket];
  ++per_day_[day];

  auto it = slds_.find(sld.dotted());
  if (it == slds_.end()) it = slds_.emplace(sld.dotted(), SldStats{}).first;
  SldTypeStats& t = it->second.by_type[entry.rrtype];
  ++t.entries;
  t.fqdns.insert(hash64(entry.rrname.dotted()));
  t.rdata_size_sum += size;
  t.rdata_size_sq_sum += static_cast<std::uint64_t>(size) * size;
  ++it->second.per_day[day];
}

void StatsBundle::accumulate(const PdnsEntry& entry) { accumulate(entry, second_level_domain(entry).sld); }

void StatsBundle::merge(const StatsBundle& o) {
  total_ += o.total_;
  for (const auto& [k, v] : o.rrtype_counts_) rrtype_counts_[k] += v;
  for (const auto& [k, v] : o.per_day_rrtype_) per_day_rrtype_[k] += v;
  for (const auto& [k, v] : o.level_counts_) level_counts_[k] += v;
  for (const auto& [k, v] : o.level_per_day_) level_per_day_[k] += v;
  for (std::size_t i = 0; i < kRdataBuckets; ++i) bucket_counts_[i] += o.bucket_counts_[i];
  for (const auto& [day, b] : o.buckets_per_day_) {
    auto& mine = buckets_per_day_[day];
    for (std::size_t i = 0; i < kRdataBuckets; ++i) mine[i] += b[i];
  }
  for (const auto& [k, v] : o.per_day_) per_day_[k] += v;
  for (const auto& [name, s] : o.slds_) slds_[name].merge(s);
}

std::optional<std::pair<Day, Day>> StatsBundle::day_range() const {
  if (per_day_.empty()) return std::nullopt;
  return std::make_pair(per_day_.begin()->first, per_day_.rbegin()->first);
}

std::string scope_name(const Scope& scope) { return scope ? scope->to_string() : std::string("all"); }

ShareTable rrtype_shares(const StatsBundle& bundle) {
  if (bundle.empty()) throw EmptyBundle("rrtype shares of an empty bundle");
  using K = RRType::Kind;
  static constexpr K kNamed[] = {K::A, K::AAAA, K::MX, K::NS, K::CNAME, K::TXT, K::Null};
  const double total = static_cast<double>(bundle.total());
  ShareTable table;
  std::uint64_t named = 0;
  for (K k : kNamed) {
    auto it = bundle.rrtype_counts().find(RRType(k));
    const std::uint64_t n = it == bundle.rrtype_counts().end() ? 0 : it->second;
    named += n;
    table.rows.push_back({RRType(k).to_string(), n, static_cast<double>(n) / total});
  }
  const std::uint64_t others = bundle.total() - named;
  table.rows.push_back({"Others", others, static_cast<double>(others) / total});

  for (const auto& [type, n] : bundle.rrtype_counts()) {
    table.breakdown.push_back({type.to_string(), n, static_cast<double>(n) / total});
  }
  std::sort(table.breakdown.begin(), table.breakdown.end(), [](const ShareRow& a, const ShareRow& b) {
    return a.count != b.count ? a.count > b.count : a.label < b.label;
  });
  return table;
}

namespace {

std::uint64_t scoped_entries(const SldStats& s, const Scope& scope) {
  if (!scope) return s.entries();
  auto it = s.by_type.find(*scope);
  return it == s.by_type.end() ? 0 : it->second.entries;
}

std::size_t scoped_distinct(const SldStats& s, const Scope& scope) {
  if (!scope) return s.distinct_fqdns();
  auto it = s.by_type.find(*scope);
  return it == s.by_type.end() ? 0 : it->second.fqdns.size();
}

template <typename T>
void sort_ranking(std::vector<std::pair<std::string, T>>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
}

}  // namespace

CdfSeries sld_cdf(const StatsBundle& bundle, const Scope& scope, CdfMeasure measure) {
  CdfSeries out;
  out.scope = scope;
  out.measure = measure;
  std::uint64_t mass_total = 0;
  for (const auto& [name, s] : bundle.slds()) {
    if (scoped_entries(s, scope) == 0) continue;
    const std::uint64_t mass =
        measure == CdfMeasure::Entries ? scoped_entries(s, scope) : scoped_distinct(s, scope);
    out.ranking.emplace_back(name, mass);
    mass_total += mass;
  }
  if (out.ranking.empty()) throw EmptyBundle("no second-level domains in scope " + scope_name(scope));
  sort_ranking(out.ranking);
  std::uint64_t running = 0;
  out.points.reserve(out.ranking.size());
  for (std::size_t i = 0; i < out.ranking.size(); ++i) {
    running += out.ranking[i].second;
    out.points.push_back({i + 1, static_cast<double>(running) / static_cast<double>(mass_total)});
  }
  return out;
}

std::vector<SldRow> top_slds(const StatsBundle& bundle, std::size_t n, const Scope& scope) {
  std::vector<std::pair<std::string, std::uint64_t>> ranking;
  std::uint64_t scope_total = 0;
  for (const auto& [name, s] : bundle.slds()) {
    const std::uint64_t e = scoped_entries(s, scope);
    if (e == 0) continue;
    ranking.emplace_back(name, e);
    scope_total += e;
  }
  if (ranking.empty()) throw EmptyBundle("no second-level domains in scope " + scope_name(scope));
  const std::size_t keep = std::min(n, ranking.size());
  std::partial_sort(ranking.begin(), ranking.begin() + static_cast<std::ptrdiff_t>(keep), ranking.end(),
                    [](const auto& a, const auto& b) {
                      return a.second != b.second ? a.second > b.second : a.first < b.first;
                    });
  std::vector<SldRow> rows;
  rows.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    const auto& s = bundle.slds().at(ranking[i].first);
    rows.push_back({ranking[i].first, ranking[i].second, scoped_distinct(s, scope),
                    static_cast<double>(ranking[i].second) / static_cast<double>(scope_total)});
  }
  return rows;
}

DailySeries daily_series(const StatsBundle& bundle, const std::vector<std::string>& slds) {
  DailySeries out;
  if (slds.empty()) return out;
  if (auto range = bundle.day_range()) {
    for (Day d = range->first; d <= range->second; d += std::chrono::days(1)) out.days.push_back(d);
  }
  for (const auto& name : slds) {
    std::vector<std::uint64_t> counts(out.days.size(), 0);
    auto it = bundle.slds().find(name);
    if (it != bundle.slds().end()) {
      for (const auto& [day, n] : it->second.per_day) {
        counts[static_cast<std::size_t>((day - out.days.front()).count())] = n;
      }
    }
    out.series.emplace_back(name, std::move(counts));
  }
  return out;
}

double linear_trend_slope(const std::vector<double>& y) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  const double mean_x = static_cast<double>(n - 1) / 2.0;
  double mean_y = 0.0;
  for (double v : y) mean_y += v;
  mean_y /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - mean_x;
    sxy += dx * (y[i] - mean_y);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<SldRdataRow> sld_rdata_sizes(const StatsBundle& bundle, const Scope& scope) {
  std::vector<SldRdataRow> rows;
  for (const auto& [name, s] : bundle.slds()) {
    std::uint64_t n = 0, sum = 0, sq = 0;
    for (const auto& [type, t] : s.by_type) {
      if (scope && type != *scope) continue;
      n += t.entries;
      sum += t.rdata_size_sum;
      sq += t.rdata_size_sq_sum;
    }
    if (n == 0) continue;
    const double mean = static_cast<double>(sum) / static_cast<double>(n);
    const double var = std::max(0.0, static_cast<double>(sq) / static_cast<double>(n) - mean * mean);
    rows.push_back({name, n, mean, std::sqrt(var)});
  }
  std::sort(rows.begin(), rows.end(), [](const SldRdataRow& a, const SldRdataRow& b) { return a.sld < b.sld; });
  return rows;
}

}  // namespace pdnsa
