#pragma once

// Randomized invariant checks. Each property runs `cases` independent random
// inputs and counts the ones that violate it.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pdnsa/filter.hpp"
#include "pdnsa/fingerprint.hpp"
#include "pdnsa/ingest.hpp"
#include "pdnsa/stats.hpp"
#include "support.hpp"

namespace properties {

using namespace pdnsa;

struct Result {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
};

inline std::string random_label(std::mt19937_64& rng, std::size_t max_len) {
  static const char* kChars = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_";
  std::string s(1 + rng() % max_len, 'a');
  for (auto& c : s) c = kChars[rng() % 64];
  return s;
}

/// Entries over a small universe that exercises every filter stage: known
/// tunnel SLDs, arpa names, mail-policy labels and TXT records, deep names.
inline std::vector<PdnsEntry> filter_corpus(std::mt19937_64& rng, std::size_t n) {
  static const char* kTypes[] = {"A", "TXT", "NULL", "CNAME", "MX", "PTR"};
  static const char* kSlds[] = {"53r.de", "tun1.com", "tun2.net", "cdn.io", "x9.org", "in-addr.arpa"};
  static const char* kPrefixes[] = {"", "_dmarc.", "s1._domainkey.", "_spf.", ""};
  std::vector<PdnsEntry> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string name = kPrefixes[rng() % 5];
    const std::size_t extra = rng() % 5;
    for (std::size_t l = 0; l < extra; ++l) name += random_label(rng, 6) + ".";
    name += kSlds[rng() % 6];
    const char* type = kTypes[rng() % 6];
    std::vector<std::string> rdata{rng() % 4 == 0 ? "v=spf1 -all" : random_label(rng, 10)};
    char t[32];
    std::snprintf(t, sizeof t, "2017-07-0%d 00:00:%02d", static_cast<int>(1 + rng() % 3), static_cast<int>(rng() % 60));
    out.push_back(support::entry(name, type, t, rdata));
  }
  return out;
}

inline FilterConfig filter_config() {
  FilterConfig c;
  c.known.cdn_domains.insert("cdn.io");
  c.min_level = 3;
  return c;
}

inline std::multiset<std::string> keys(const std::vector<PdnsEntry>& v) {
  std::multiset<std::string> out;
  for (const auto& e : v) out.insert(to_ndjson(e));
  return out;
}

inline std::vector<PdnsEntry> per_entry_stage(int k, const std::vector<PdnsEntry>& v, const FilterConfig& c) {
  switch (k) {
    case 0: return prefilter_rrtype(v, c.prefilter_types);
    case 1: return filter_known_domains(v, c.known);
    case 2: return filter_min_level(v, c.min_level);
    default: return filter_special_use(v, c.special_use);
  }
}

inline Result check(const std::string& name, std::size_t cases, std::uint64_t seed,
                    const std::function<bool(std::mt19937_64&, std::string&)>& body) {
  Result r{name, cases, 0, {}};
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    std::string why;
    if (!body(rng, why)) {
      if (r.failures++ == 0) r.first_failure = "case " + std::to_string(i) + ": " + why;
    }
  }
  return r;
}

inline std::vector<Result> run_all(std::size_t cases = 10000, std::uint64_t seed = 1) {
  std::vector<Result> out;

  out.push_back(check("fqdn parse/format round trip", cases, seed, [](std::mt19937_64& rng, std::string& why) {
    std::vector<std::string> labels(1 + rng() % 6);
    std::string raw;
    for (auto& l : labels) {
      l = random_label(rng, 20);
      raw += (raw.empty() ? "" : ".") + l;
    }
    if (rng() % 2) raw += ".";
    const Fqdn n = Fqdn::parse(raw);
    std::string lower = raw;
    if (lower.back() == '.') lower.pop_back();
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (n.dotted() != lower) return why = "dotted " + n.dotted(), false;
    if (Fqdn::parse(n.canonical()) != n || Fqdn::parse(n.dotted()) != n) return why = "reparse " + raw, false;
    if (n.raw() != raw) return why = "raw " + raw, false;
    return true;
  }));

  out.push_back(check("level equals label count", cases, seed + 1, [](std::mt19937_64& rng, std::string& why) {
    const std::size_t k = 1 + rng() % 8;
    std::vector<std::string> labels;
    std::string raw;
    for (std::size_t i = 0; i < k; ++i) {
      labels.push_back(random_label(rng, 12));
      raw += (i ? "." : "") + labels.back();
    }
    const Fqdn n = Fqdn::parse(raw);
    if (level(n) != k) return why = raw, false;
    for (std::size_t lv = 1; lv <= k; ++lv) {
      if (label_length(n, lv) != labels[k - lv].size()) return why = raw + " level " + std::to_string(lv), false;
    }
    return !label_length(n, k + 1).has_value();
  }));

  out.push_back(check("filter stages are monotone", cases, seed + 2, [](std::mt19937_64& rng, std::string& why) {
    const auto v = filter_corpus(rng, 1 + rng() % 40);
    const FilterConfig c = filter_config();
    auto cur = v;
    for (int k = 0; k < 4; ++k) {
      const auto next = per_entry_stage(k, cur, c);
      const auto a = keys(cur), b = keys(next);
      if (!std::includes(a.begin(), a.end(), b.begin(), b.end())) return why = "stage " + std::to_string(k), false;
      cur = next;
    }
    const auto grouped = filter_min_subdomains(cur, c.min_distinct_fqdns);
    const auto a = keys(cur), b = keys(grouped);
    if (!std::includes(a.begin(), a.end(), b.begin(), b.end())) return why = "grouping", false;
    const CandidateReport r = run_pipeline(v, c);
    for (const auto& s : r.stages) {
      if (s.entries_out > s.entries_in) return why = "count " + s.id, false;
    }
    return true;
  }));

  out.push_back(check("pipeline is idempotent on its survivors", cases, seed + 3, [](std::mt19937_64& rng, std::string& why) {
    const auto v = filter_corpus(rng, 1 + rng() % 40);
    const FilterConfig c = filter_config();
    const CandidateReport first = run_pipeline(v, c);
    std::vector<PdnsEntry> survivors = v;
    for (int k = 0; k < 4; ++k) survivors = per_entry_stage(k, survivors, c);
    survivors = filter_min_subdomains(survivors, c.min_distinct_fqdns);
    const CandidateReport second = run_pipeline(survivors, c);
    if (first.candidate_slds() != second.candidate_slds()) return why = "candidate sets differ", false;
    return true;
  }));

  out.push_back(check("per-entry stages commute", cases, seed + 4, [](std::mt19937_64& rng, std::string& why) {
    const auto v = filter_corpus(rng, 1 + rng() % 40);
    const FilterConfig c = filter_config();
    std::vector<int> order{0, 1, 2, 3};
    auto reference = v;
    for (int k : order) reference = per_entry_stage(k, reference, c);
    std::shuffle(order.begin(), order.end(), rng);
    auto shuffled = v;
    for (int k : order) shuffled = per_entry_stage(k, shuffled, c);
    if (keys(reference) != keys(shuffled)) return why = "order dependence", false;
    return true;
  }));

  out.push_back(check("CDF is monotone and ends at one", cases, seed + 5, [](std::mt19937_64& rng, std::string& why) {
    const auto v = support::random_entries(rng, 1 + rng() % 40, 1 + rng() % 15, 3);
    StatsBundle b;
    for (const auto& e : v) b.accumulate(e);
    for (auto measure : {CdfMeasure::DistinctFqdns, CdfMeasure::Entries}) {
      const CdfSeries s = sld_cdf(b, std::nullopt, measure);
      if (s.points.size() != b.slds().size()) return why = "point count", false;
      for (std::size_t i = 1; i < s.points.size(); ++i) {
        if (s.points[i].cumulative_share < s.points[i - 1].cumulative_share) return why = "not monotone", false;
        if (s.ranking[i].second > s.ranking[i - 1].second) return why = "ranking order", false;
      }
      if (std::abs(s.points.back().cumulative_share - 1.0) > 1e-9) return why = "end point", false;
    }
    double sum = 0;
    for (const auto& row : rrtype_shares(b).rows) sum += row.share;
    if (std::abs(sum - 1.0) > 1e-9) return why = "shares sum", false;
    for (const auto& [day, buckets] : b.buckets_per_day()) {
      if (buckets[0] + buckets[1] + buckets[2] != b.per_day().at(day)) return why = "bucket sum", false;
    }
    return true;
  }));

  out.push_back(check("stats merge is associative and commutative", cases, seed + 6,
                      [](std::mt19937_64& rng, std::string& why) {
                        StatsBundle x[3];
                        for (auto& b : x) {
                          for (const auto& e : support::random_entries(rng, rng() % 15, 6, 3)) b.accumulate(e);
                        }
                        StatsBundle left = x[0], right = x[1], swapped = x[1];
                        left.merge(x[1]);
                        left.merge(x[2]);
                        right.merge(x[2]);
                        StatsBundle right_total = x[0];
                        right_total.merge(right);
                        swapped.merge(x[0]);
                        StatsBundle ab = x[0];
                        ab.merge(x[1]);
                        if (!(left == right_total)) return why = "associativity", false;
                        if (!(ab == swapped)) return why = "commutativity", false;
                        return true;
                      }));

  out.push_back(check("match count is the sum of attribute matches", cases, seed + 7,
                      [](std::mt19937_64& rng, std::string& why) {
                        ImplementationProfile p;
                        p.name = "p";
                        p.payload_length = {rng() % 50, 50 + rng() % 200};
                        p.level = {1 + rng() % 4, 4 + rng() % 6};
                        p.len_l4 = {rng() % 10, 10 + rng() % 50};
                        p.len_l5 = {rng() % 10, 10 + rng() % 50};
                        p.rrtypes = {RRType::Kind::Null};
                        p.encodings = {static_cast<Encoding>(rng() % 4)};
                        p.leading = {static_cast<CharClass>(rng() % 3)};
                        if (rng() % 2) p.markers = {"up"};
                        std::string name;
                        for (std::size_t i = 0, k = 1 + rng() % 7; i < k; ++i) name += random_label(rng, 30) + ".";
                        name += "example.com";
                        const auto e = support::entry(name, rng() % 2 ? "NULL" : "TXT");
                        const Attribution a =
                            match_profile(extract_attributes(e, {"up"}), p, std::vector<std::string>{"up"});
                        std::size_t sum = 0;
                        for (bool m : a.per_attribute) sum += m;
                        if (sum != a.match_count) return why = name, false;
                        return true;
                      }));

  out.push_back(check("hex/base32 detection ignores case", cases, seed + 8, [](std::mt19937_64& rng, std::string& why) {
    static const char* kAlpha = "0123456789abcdefghijklmnopqrstuvwxyz";
    std::string s(rng() % 40, 'a');
    for (auto& c : s) c = kAlpha[rng() % (rng() % 2 ? 16 : 36)];
    std::string upper = s;
    for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const Encoding lo = detect_encoding(s), up = detect_encoding(upper);
    const bool folded = lo == Encoding::Hex || lo == Encoding::Base32;
    if (folded && lo != up) return why = s, false;
    return true;
  }));

  return out;
}

}  // namespace properties
