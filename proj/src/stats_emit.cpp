#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "pdnsa/error.hpp"
#include "pdnsa/stats.hpp"

namespace pdnsa {
namespace {

std::vector<Scope> all_scopes(const StatsBundle& bundle) {
  std::vector<Scope> scopes{std::nullopt};
  for (const auto& [type, _] : bundle.rrtype_counts()) scopes.emplace_back(type);
  return scopes;
}

void line(std::string& out, std::initializer_list<std::string_view> cols) {
  bool first = true;
  for (auto c : cols) {
    if (!first) out.push_back(',');
    out.append(c);
    first = false;
  }
  out.push_back('\n');
}

std::string u(std::uint64_t v) { return std::to_string(v); }

}  // namespace

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string rrtype_shares_csv(const StatsBundle& bundle) {
  std::string out = "rrtype,count,share\n";
  if (bundle.empty()) return out;
  for (const auto& r : rrtype_shares(bundle).rows) line(out, {r.label, u(r.count), format_fixed(r.share)});
  return out;
}

std::string rrtype_breakdown_csv(const StatsBundle& bundle) {
  std::string out = "rrtype,count,share\n";
  if (bundle.empty()) return out;
  for (const auto& r : rrtype_shares(bundle).breakdown) line(out, {r.label, u(r.count), format_fixed(r.share)});
  return out;
}

std::string rrtype_per_day_csv(const StatsBundle& bundle) {
  std::string out = "day,rrtype,count,share_of_day\n";
  for (const auto& [key, n] : bundle.per_day_rrtype()) {
    const double day_total = static_cast<double>(bundle.per_day().at(key.first));
    line(out, {format_day(key.first), key.second.to_string(), u(n), format_fixed(static_cast<double>(n) / day_total)});
  }
  return out;
}

std::string sld_cdf_csv(const StatsBundle& bundle, CdfMeasure measure) {
  std::string out = "scope,rank,sld,mass,cumulative_share\n";
  if (bundle.empty()) return out;
  for (const auto& scope : all_scopes(bundle)) {
    const CdfSeries cdf = sld_cdf(bundle, scope, measure);
    const std::string name = scope_name(scope);
    for (std::size_t i = 0; i < cdf.points.size(); ++i) {
      line(out, {name, u(cdf.points[i].rank), cdf.ranking[i].first, u(cdf.ranking[i].second),
                 format_fixed(cdf.points[i].cumulative_share)});
    }
  }
  return out;
}

std::string top_slds_csv(const StatsBundle& bundle, std::size_t n) {
  std::string out = "scope,rank,sld,entries,distinct_fqdns,share\n";
  if (bundle.empty()) return out;
  for (const auto& scope : all_scopes(bundle)) {
    const std::string name = scope_name(scope);
    std::size_t rank = 0;
    for (const auto& r : top_slds(bundle, n, scope)) {
      line(out, {name, u(++rank), r.sld, u(r.entries), u(r.distinct_fqdns), format_fixed(r.share)});
    }
  }
  return out;
}

std::string level_per_day_csv(const StatsBundle& bundle) {
  std::string out = "day,level,count\n";
  for (const auto& [key, n] : bundle.level_per_day()) line(out, {format_day(key.first), u(key.second), u(n)});
  return out;
}

std::string rdata_size_per_day_csv(const StatsBundle& bundle) {
  std::string out = "day,le100,101-1000,gt1000,total\n";
  for (const auto& [day, b] : bundle.buckets_per_day()) {
    line(out, {format_day(day), u(b[0]), u(b[1]), u(b[2]), u(b[0] + b[1] + b[2])});
  }
  return out;
}

std::string sld_rdata_csv(const StatsBundle& bundle) {
  std::string out = "sld,entries,mean,stddev\n";
  for (const auto& r : sld_rdata_sizes(bundle)) {
    line(out, {r.sld, u(r.entries), format_fixed(r.mean, 3), format_fixed(r.stddev, 3)});
  }
  return out;
}

std::string top_daily_csv(const StatsBundle& bundle, std::size_t n) {
  std::string out = "day,sld,count\n";
  if (bundle.empty()) return out;
  std::vector<std::string> names;
  for (const auto& r : top_slds(bundle, n)) names.push_back(r.sld);
  const DailySeries ds = daily_series(bundle, names);
  for (std::size_t d = 0; d < ds.days.size(); ++d) {
    for (const auto& [sld, counts] : ds.series) line(out, {format_day(ds.days[d]), sld, u(counts[d])});
  }
  return out;
}

std::string stats_json(const StatsBundle& bundle, std::size_t top_n) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["total"] = bundle.total();
  doc["distinct_slds"] = bundle.slds().size();
  if (auto range = bundle.day_range()) {
    doc["first_day"] = format_day(range->first);
    doc["last_day"] = format_day(range->second);
    doc["days"] = (range->second - range->first).count() + 1;
  }
  json shares = json::array();
  json top = json::array();
  json trend = json::array();
  if (!bundle.empty()) {
    for (const auto& r : rrtype_shares(bundle).rows) {
      shares.push_back({{"rrtype", r.label}, {"count", r.count}, {"share", r.share}});
    }
    std::vector<std::string> names;
    for (const auto& r : top_slds(bundle, top_n)) {
      top.push_back({{"sld", r.sld}, {"entries", r.entries}, {"distinct_fqdns", r.distinct_fqdns}, {"share", r.share}});
      names.push_back(r.sld);
    }
    for (const auto& [sld, counts] : daily_series(bundle, names).series) {
      std::vector<double> y(counts.begin(), counts.end());
      trend.push_back({{"sld", sld}, {"slope_per_day", linear_trend_slope(y)}});
    }
    const CdfSeries cdf = sld_cdf(bundle);
    auto rank_at = [&](double q) {
      for (const auto& p : cdf.points) {
        if (p.cumulative_share >= q - 1e-12) return p.rank;
      }
      return cdf.points.back().rank;
    };
    doc["cdf_rank_at_50"] = rank_at(0.5);
    doc["cdf_rank_at_80"] = rank_at(0.8);
  }
  doc["rrtype_shares"] = shares;
  doc["top_slds"] = top;
  doc["top_sld_trends"] = trend;
  json levels = json::object();
  for (const auto& [lvl, n] : bundle.level_counts()) levels[std::to_string(lvl)] = n;
  doc["level_counts"] = levels;
  json buckets = json::object();
  for (std::size_t i = 0; i < kRdataBuckets; ++i) {
    buckets[std::string(to_string(static_cast<RdataBucket>(i)))] = bundle.bucket_counts()[i];
  }
  doc["rdata_size_buckets"] = buckets;
  return doc.dump(2) + "\n";
}

std::vector<std::string> write_stats(const StatsBundle& bundle, const std::string& dir, std::size_t top_n) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  const std::vector<std::pair<std::string, std::string>> files = {
      {"rrtype_shares.csv", rrtype_shares_csv(bundle)},
      {"rrtype_breakdown.csv", rrtype_breakdown_csv(bundle)},
      {"rrtype_per_day.csv", rrtype_per_day_csv(bundle)},
      {"sld_cdf.csv", sld_cdf_csv(bundle, CdfMeasure::DistinctFqdns)},
      {"sld_cdf_entries.csv", sld_cdf_csv(bundle, CdfMeasure::Entries)},
      {"top_slds.csv", top_slds_csv(bundle, top_n)},
      {"level_per_day.csv", level_per_day_csv(bundle)},
      {"rdata_size_per_day.csv", rdata_size_per_day_csv(bundle)},
      {"sld_rdata.csv", sld_rdata_csv(bundle)},
      {"top_daily.csv", top_daily_csv(bundle, top_n)},
      {"stats.json", stats_json(bundle, top_n)},
  };
  std::vector<std::string> names;
  for (const auto& [name, body] : files) {
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream f(path, std::ios::binary);
    f << body;
    if (!f) throw IoError("cannot write " + path.string());
    names.push_back(name);
  }
  return names;
}

}  // namespace pdnsa
