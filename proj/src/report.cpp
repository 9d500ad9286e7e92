#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "pdnsa/error.hpp"
#include "pdnsa/filter.hpp"
#include "pdnsa/stats.hpp"

namespace pdnsa {
namespace {

using json = nlohmann::ordered_json;

json candidate_json(const Candidate& c) {
  json j;
  j["sld"] = c.sld;
  j["distinct_fqdns"] = c.distinct_fqdns;
  j["entries"] = c.entries;
  j["days_seen"] = c.days_seen;
  j["first_day"] = c.first_day;
  j["last_day"] = c.last_day;
  j["rrtype_mix"] = c.rrtype_mix;
  j["dominant_bailiwick"] = c.dominant_bailiwick;
  j["samples"] = c.samples;
  j["watchlist"] = c.watchlist;
  if (c.attribution) {
    const auto& a = *c.attribution;
    j["attribution"] = {{"implementation", a.implementation},
                        {"agreement", a.fraction},
                        {"entries", a.entries},
                        {"unknown", a.unknown},
                        {"tied", a.tied}};
  }
  if (!c.post_filter.empty()) j["post_filter"] = c.post_filter;
  return j;
}

Candidate candidate_from(const json& j) {
  Candidate c;
  c.sld = j.at("sld").get<std::string>();
  c.distinct_fqdns = j.at("distinct_fqdns").get<std::uint64_t>();
  c.entries = j.at("entries").get<std::uint64_t>();
  c.days_seen = j.at("days_seen").get<std::uint64_t>();
  c.first_day = j.value("first_day", "");
  c.last_day = j.value("last_day", "");
  c.rrtype_mix = j.at("rrtype_mix").get<std::map<std::string, std::uint64_t>>();
  c.dominant_bailiwick = j.value("dominant_bailiwick", "");
  c.samples = j.at("samples").get<std::vector<std::string>>();
  c.watchlist = j.value("watchlist", false);
  if (j.contains("attribution")) {
    const auto& a = j["attribution"];
    SldAttribution s;
    s.implementation = a.at("implementation").get<std::string>();
    s.fraction = a.at("agreement").get<double>();
    s.entries = a.at("entries").get<std::uint64_t>();
    s.unknown = a.at("unknown").get<std::uint64_t>();
    s.tied = a.at("tied").get<std::vector<std::string>>();
    c.attribution = s;
  }
  c.post_filter = j.value("post_filter", "");
  return c;
}

std::string mix_text(const std::map<std::string, std::uint64_t>& mix) {
  std::string out;
  for (const auto& [t, n] : mix) {
    if (!out.empty()) out += ' ';
    out += t + ':' + std::to_string(n);
  }
  return out;
}

}  // namespace

std::string report_json(const CandidateReport& r) {
  json doc;
  doc["total_entries"] = r.total_entries;
  doc["first_day"] = r.first_day;
  doc["last_day"] = r.last_day;
  doc["observation_days"] = r.observation_days;
  json stages = json::array();
  for (const auto& s : r.stages) {
    stages.push_back({{"stage", s.id},
                      {"name", s.name},
                      {"entries_in", s.entries_in},
                      {"entries_out", s.entries_out},
                      {"slds_out", s.slds_out}});
  }
  doc["stages"] = stages;
  json cands = json::array();
  for (const auto& c : r.candidates) cands.push_back(candidate_json(c));
  doc["candidates"] = cands;
  json post = json::array();
  for (const auto& c : r.post_filtered) post.push_back(candidate_json(c));
  doc["post_filtered"] = post;
  json known = json::array();
  for (const auto& [sld, n] : r.dropped_known_tunnels) known.push_back({{"sld", sld}, {"entries", n}});
  doc["dropped_known_tunnels"] = known;
  json watch = json::array();
  for (const auto& h : r.watchlist_hits) {
    watch.push_back({{"sld", h.sld}, {"entries", h.entries}, {"rrtype_mix", h.rrtype_mix}, {"candidate", h.candidate}});
  }
  doc["watchlist_hits"] = watch;
  return doc.dump(2) + "\n";
}

CandidateReport report_from_json(const std::string& text) {
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ConfigError("candidate report is not a JSON object");
  try {
    CandidateReport r;
    r.total_entries = doc.at("total_entries").get<std::uint64_t>();
    r.first_day = doc.value("first_day", "");
    r.last_day = doc.value("last_day", "");
    r.observation_days = doc.value("observation_days", std::uint64_t{0});
    for (const auto& s : doc.at("stages")) {
      r.stages.push_back({s.at("stage").get<std::string>(), s.at("name").get<std::string>(),
                          s.at("entries_in").get<std::uint64_t>(), s.at("entries_out").get<std::uint64_t>(),
                          s.at("slds_out").get<std::uint64_t>()});
    }
    for (const auto& c : doc.at("candidates")) r.candidates.push_back(candidate_from(c));
    for (const auto& c : doc.at("post_filtered")) r.post_filtered.push_back(candidate_from(c));
    for (const auto& k : doc.at("dropped_known_tunnels")) {
      r.dropped_known_tunnels.emplace_back(k.at("sld").get<std::string>(), k.at("entries").get<std::uint64_t>());
    }
    for (const auto& w : doc.at("watchlist_hits")) {
      WatchlistHit h;
      h.sld = w.at("sld").get<std::string>();
      h.entries = w.at("entries").get<std::uint64_t>();
      h.rrtype_mix = w.at("rrtype_mix").get<std::map<std::string, std::uint64_t>>();
      h.candidate = w.at("candidate").get<bool>();
      r.watchlist_hits.push_back(std::move(h));
    }
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed candidate report: ") + e.what());
  }
}

std::string stages_csv(const CandidateReport& r) {
  std::string out = "stage,name,entries_in,entries_out,slds_out\n";
  for (const auto& s : r.stages) {
    out += s.id + ',' + s.name + ',' + std::to_string(s.entries_in) + ',' + std::to_string(s.entries_out) + ',' +
           std::to_string(s.slds_out) + '\n';
  }
  return out;
}

std::string attribution_csv(const CandidateReport& r) {
  std::string out = "sld,implementation,agreement,entries\n";
  for (const auto& c : r.candidates) {
    const std::string impl = c.attribution ? c.attribution->implementation : std::string(kUnknown);
    const double frac = c.attribution ? c.attribution->fraction : 0.0;
    out += c.sld + ',' + impl + ',' + format_fixed(frac, 4) + ',' + std::to_string(c.entries) + '\n';
  }
  return out;
}

std::string report_text(const CandidateReport& r) {
  std::ostringstream out;
  char buf[256];
  out << "Candidate report\n";
  out << "entries: " << r.total_entries;
  if (!r.first_day.empty()) out << "  window: " << r.first_day << " .. " << r.last_day;
  out << "  days: " << r.observation_days << "\n\n";

  out << "Stage                      in          out     SLDs\n";
  for (const auto& s : r.stages) {
    const std::string label = s.id + " " + s.name;
    std::snprintf(buf, sizeof buf, "%-18s %12llu %12llu %8llu\n", label.c_str(),
                  static_cast<unsigned long long>(s.entries_in), static_cast<unsigned long long>(s.entries_out),
                  static_cast<unsigned long long>(s.slds_out));
    out << buf;
  }

  out << "\nCandidates (" << r.candidates.size() << ")\n";
  for (const auto& c : r.candidates) {
    out << "  " << c.sld << (c.watchlist ? "  [watchlist]" : "") << "\n";
    out << "    fqdns " << c.distinct_fqdns << ", entries " << c.entries << ", days " << c.days_seen << " ("
        << c.first_day << " .. " << c.last_day << ")\n";
    out << "    rrtypes " << mix_text(c.rrtype_mix);
    if (!c.dominant_bailiwick.empty()) out << ", bailiwick " << c.dominant_bailiwick;
    out << "\n";
    if (c.attribution) {
      out << "    implementation " << c.attribution->implementation << " ("
          << format_fixed(c.attribution->fraction * 100.0, 1) << "% of entries)";
      if (c.attribution->tied.size() > 1) {
        out << ", tied:";
        for (const auto& t : c.attribution->tied) out << ' ' << t;
      }
      out << "\n";
    }
    for (const auto& s : c.samples) out << "      " << s << "\n";
  }

  if (!r.post_filtered.empty()) {
    out << "\nPost-filtered (" << r.post_filtered.size() << ")\n";
    for (const auto& c : r.post_filtered) {
      out << "  " << c.sld << "  " << c.post_filter << ", entries " << c.entries << ", days " << c.days_seen << "\n";
    }
  }
  out << "\nDropped known tunnel domains (" << r.dropped_known_tunnels.size() << ")\n";
  for (const auto& [sld, n] : r.dropped_known_tunnels) out << "  " << sld << "  " << n << "\n";
  if (!r.watchlist_hits.empty()) {
    out << "\nWatchlist hits (" << r.watchlist_hits.size() << ")\n";
    for (const auto& h : r.watchlist_hits) {
      out << "  " << h.sld << "  entries " << h.entries << "  " << mix_text(h.rrtype_mix)
          << (h.candidate ? "  candidate" : "") << "\n";
    }
  }
  return out.str();
}

}  // namespace pdnsa
