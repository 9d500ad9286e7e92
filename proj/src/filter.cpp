#include "pdnsa/filter.hpp"

#include <algorithm>
#include <fstream>

#include "pdnsa/error.hpp"

namespace pdnsa {

DomainSet::DomainSet(std::initializer_list<std::string_view> names) {
  for (auto n : names) insert(n);
}

void DomainSet::insert(std::string_view name) {
  auto parsed = Fqdn::try_parse(name);
  if (auto* err = std::get_if<NameErrorKind>(&parsed)) {
    throw ConfigError("bad domain '" + std::string(name) + "': " + std::string(to_string(*err)));
  }
  names_.insert(std::get<Fqdn>(parsed).dotted());
}

DomainSet DomainSet::parse(std::istream& in) {
  DomainSet out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    std::string_view name(line.data() + b, e - b + 1);
    // Ranked lists ("1,google.com") keep only the domain column.
    if (auto comma = name.rfind(','); comma != std::string_view::npos) name.remove_prefix(comma + 1);
    out.insert(name);
  }
  return out;
}

DomainSet DomainSet::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open domain list: " + path);
  return parse(f);
}

std::vector<std::string> DomainSet::sorted() const {
  std::vector<std::string> v(names_.begin(), names_.end());
  std::sort(v.begin(), v.end());
  return v;
}

const DomainSet& default_known_tunnels() {
  static const DomainSet kSet{"53r.de", "8u6.de", "1yf.de", "2yf.de", "qv4.in", "mm4.in", "na2.in"};
  return kSet;
}

void KnownLists::validate() const {
  const std::pair<const DomainSet*, const char*> sets[] = {
      {&cdn_domains, "cdn"}, {&known_tunnel_domains, "known-tunnel"}, {&watchlist, "watchlist"}};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      for (const auto& name : sets[i].first->sorted()) {
        if (sets[j].first->contains(name)) {
          throw ConfigError(name + " is in both the " + sets[i].second + " and " + sets[j].second + " lists");
        }
      }
    }
  }
}

void FilterConfig::validate() const {
  if (min_level < 1) throw ConfigError("min_level must be >= 1");
  if (min_distinct_fqdns < 1) throw ConfigError("min_distinct_fqdns must be >= 1");
  if (post.observation_days && *post.observation_days < 1) throw ConfigError("observation_days must be >= 1");
  if (post.drop_alexa_top && post.alexa.empty()) throw ConfigError("drop_alexa_top needs a non-empty list");
  known.validate();
}

bool pass_rrtype(const PdnsEntry& e, const std::set<RRType>& types) { return types.count(e.rrtype) > 0; }

bool pass_known_domains(const Fqdn& sld, const KnownLists& lists) {
  const std::string& s = sld.dotted();
  if (lists.watchlist.contains(s)) return true;
  return !lists.cdn_domains.contains(s) && !lists.known_tunnel_domains.contains(s);
}

bool pass_min_level(const PdnsEntry& e, std::size_t min_level) { return e.rrname.level() >= min_level; }

namespace {

bool istarts_with(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    char p = prefix[i];
    if (p >= 'A' && p <= 'Z') p = static_cast<char>(p + 32);
    if (c != p) return false;
  }
  return true;
}

bool is_auth_label(std::string_view label) {
  return label == "_dmarc" || label == "_domainkey" || label == "_spf";
}

}  // namespace

bool is_special_use(const PdnsEntry& e, const SpecialUseRules& rules) {
  if (rules.arpa && e.rrname.tld() == "arpa") return true;
  if (rules.auth_labels) {
    for (auto label : e.rrname.labels()) {
      if (is_auth_label(label)) return true;
    }
  }
  if (rules.txt_policy && e.rrtype == RRType(RRType::Kind::TXT)) {
    for (std::string_view v : e.rdata) {
      // Presentation form may keep the character-string quotes.
      while (!v.empty() && (v.front() == '"' || v.front() == ' ')) v.remove_prefix(1);
      if (istarts_with(v, "v=spf1") || istarts_with(v, "v=DKIM1") || istarts_with(v, "v=DMARC1")) return true;
    }
  }
  return false;
}

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::RRType: return "rrtype";
    case Stage::KnownDomains: return "known_domains";
    case Stage::MinLevel: return "min_level";
    case Stage::SpecialUse: return "special_use";
    case Stage::MinSubdomains: return "min_subdomains";
  }
  return "?";
}

std::string_view stage_id(Stage s) {
  switch (s) {
    case Stage::RRType: return "0";
    case Stage::KnownDomains: return "1";
    case Stage::MinLevel: return "2";
    case Stage::SpecialUse: return "4";
    case Stage::MinSubdomains: return "3";
  }
  return "?";
}

std::vector<std::string> CandidateReport::candidate_slds() const {
  std::vector<std::string> out;
  for (const auto& c : candidates) out.push_back(c.sld);
  std::sort(out.begin(), out.end());
  return out;
}

const Candidate* CandidateReport::find(const std::string& sld) const {
  for (const auto& c : candidates) {
    if (c.sld == sld) return &c;
  }
  return nullptr;
}

void Pipeline::Group::add_sample(const std::string& name) {
  auto it = std::lower_bound(samples.begin(), samples.end(), name);
  if (it != samples.end() && *it == name) return;
  if (samples.size() >= kMaxSamples && it == samples.end()) return;
  samples.insert(it, name);
  if (samples.size() > kMaxSamples) samples.pop_back();
}

void Pipeline::Group::merge(const Group& o) {
  fqdns.merge(o.fqdns);
  entries += o.entries;
  days.insert(o.days.begin(), o.days.end());
  for (const auto& [k, v] : o.types) types[k] += v;
  for (const auto& [k, v] : o.bailiwicks) bailiwicks[k] += v;
  for (const auto& s : o.samples) add_sample(s);
  vote.merge(o.vote);
}

Pipeline::Pipeline(FilterConfig config, const Classifier* classifier, const PublicSuffixList* psl)
    : config_(std::move(config)), classifier_(classifier), resolver_(psl) {
  config_.validate();
}

void Pipeline::consume(const PdnsEntry& e) { consume(e, resolver_.resolve(e).sld); }

void Pipeline::consume(const PdnsEntry& e, const Fqdn& sld) {
  ++total_;
  const Day day = day_of(e.time_seen);
  if (!first_day_ || day < *first_day_) first_day_ = day;
  if (!last_day_ || day > *last_day_) last_day_ = day;

  const std::string& s = sld.dotted();
  if (config_.known.watchlist.contains(s)) {
    Watch& w = watch_[s];
    ++w.entries;
    ++w.types[e.rrtype];
  }

  const std::uint64_t sld_hash = hash64(s);
  if (!pass_rrtype(e, config_.prefilter_types)) return;
  ++passed_[0];
  slds_passed_[0].insert(sld_hash);

  if (!pass_known_domains(sld, config_.known)) {
    if (config_.known.known_tunnel_domains.contains(s)) ++dropped_known_[s];
    return;
  }
  ++passed_[1];
  slds_passed_[1].insert(sld_hash);

  if (!pass_min_level(e, config_.min_level)) return;
  ++passed_[2];
  slds_passed_[2].insert(sld_hash);

  if (is_special_use(e, config_.special_use)) return;
  ++passed_[3];
  slds_passed_[3].insert(sld_hash);

  auto it = groups_.find(s);
  if (it == groups_.end()) it = groups_.emplace(s, Group{}).first;
  Group& g = it->second;
  g.fqdns.insert(hash64(e.rrname.dotted()));
  ++g.entries;
  g.days.insert(day);
  ++g.types[e.rrtype];
  if (e.bailiwick) ++g.bailiwicks[e.bailiwick->dotted()];
  g.add_sample(e.rrname.dotted());
  if (classifier_) g.vote.add(classifier_->classify(e, sld));
}

void Pipeline::merge(const Pipeline& o) {
  total_ += o.total_;
  if (o.first_day_ && (!first_day_ || *o.first_day_ < *first_day_)) first_day_ = o.first_day_;
  if (o.last_day_ && (!last_day_ || *o.last_day_ > *last_day_)) last_day_ = o.last_day_;
  for (std::size_t i = 0; i < passed_.size(); ++i) {
    passed_[i] += o.passed_[i];
    slds_passed_[i].merge(o.slds_passed_[i]);
  }
  for (const auto& [k, g] : o.groups_) groups_[k].merge(g);
  for (const auto& [k, v] : o.dropped_known_) dropped_known_[k] += v;
  for (const auto& [k, w] : o.watch_) {
    Watch& mine = watch_[k];
    mine.entries += w.entries;
    for (const auto& [t, n] : w.types) mine.types[t] += n;
  }
}

CandidateReport Pipeline::finish() const {
  CandidateReport r;
  r.total_entries = total_;
  if (first_day_) {
    r.first_day = format_day(*first_day_);
    r.last_day = format_day(*last_day_);
    r.observation_days = static_cast<std::uint64_t>((*last_day_ - *first_day_).count() + 1);
  }
  if (config_.post.observation_days) r.observation_days = *config_.post.observation_days;

  static constexpr Stage kPerEntry[] = {Stage::RRType, Stage::KnownDomains, Stage::MinLevel, Stage::SpecialUse};
  std::uint64_t in = total_;
  for (std::size_t i = 0; i < 4; ++i) {
    r.stages.push_back({std::string(stage_id(kPerEntry[i])), std::string(stage_name(kPerEntry[i])), in, passed_[i],
                        slds_passed_[i].size()});
    in = passed_[i];
  }

  std::vector<std::string> order;
  if (classifier_) {
    for (const auto& p : classifier_->profiles().profiles()) order.push_back(p.name);
  }

  std::vector<Candidate> kept;
  std::uint64_t kept_entries = 0;
  for (const auto& [sld, g] : groups_) {
    if (g.fqdns.size() < config_.min_distinct_fqdns) continue;
    Candidate c;
    c.sld = sld;
    c.distinct_fqdns = g.fqdns.size();
    c.entries = g.entries;
    c.days_seen = g.days.size();
    c.first_day = format_day(*g.days.begin());
    c.last_day = format_day(*g.days.rbegin());
    for (const auto& [t, n] : g.types) c.rrtype_mix[t.to_string()] += n;
    std::uint64_t best = 0;
    for (const auto& [b, n] : g.bailiwicks) {
      if (n > best) {
        best = n;
        c.dominant_bailiwick = b;
      }
    }
    c.samples = g.samples;
    c.watchlist = config_.known.watchlist.contains(sld);
    if (classifier_) c.attribution = g.vote.result(order);
    kept_entries += g.entries;
    kept.push_back(std::move(c));
  }
  r.stages.push_back({std::string(stage_id(Stage::MinSubdomains)), std::string(stage_name(Stage::MinSubdomains)), in,
                      kept_entries, kept.size()});
  in = kept_entries;

  auto by_volume = [](const Candidate& a, const Candidate& b) {
    return a.entries != b.entries ? a.entries > b.entries : a.sld < b.sld;
  };
  std::sort(kept.begin(), kept.end(), by_volume);

  const auto& post = config_.post;
  struct PostStage {
    bool enabled;
    const char* name;
  };
  const PostStage post_stages[] = {{post.drop_daily_seen, "daily_seen"},
                                   {post.drop_single_entry, "single_entry"},
                                   {post.drop_alexa_top, "alexa"}};
  for (const auto& ps : post_stages) {
    if (!ps.enabled) continue;
    std::vector<Candidate> next;
    std::uint64_t out_entries = 0;
    for (auto& c : kept) {
      bool drop = false;
      if (!c.watchlist) {
        const std::string_view n = ps.name;
        if (n == "daily_seen") drop = c.days_seen >= r.observation_days;
        if (n == "single_entry") drop = c.entries == 1;
        if (n == "alexa") drop = post.alexa.contains(c.sld);
      }
      if (drop) {
        c.post_filter = ps.name;
        r.post_filtered.push_back(std::move(c));
      } else {
        out_entries += c.entries;
        next.push_back(std::move(c));
      }
    }
    kept = std::move(next);
    r.stages.push_back({"post", ps.name, in, out_entries, kept.size()});
    in = out_entries;
  }
  std::sort(r.post_filtered.begin(), r.post_filtered.end(), by_volume);
  r.candidates = std::move(kept);

  for (const auto& [sld, n] : dropped_known_) r.dropped_known_tunnels.emplace_back(sld, n);
  std::sort(r.dropped_known_tunnels.begin(), r.dropped_known_tunnels.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  for (const auto& [sld, w] : watch_) {
    WatchlistHit h;
    h.sld = sld;
    h.entries = w.entries;
    for (const auto& [t, n] : w.types) h.rrtype_mix[t.to_string()] += n;
    h.candidate = r.find(sld) != nullptr;
    r.watchlist_hits.push_back(std::move(h));
  }
  return r;
}

CandidateReport run_pipeline(EntrySource& source, const FilterConfig& config, const Classifier* classifier) {
  Pipeline p(config, classifier);
  PdnsEntry e;
  while (source.next(e)) p.consume(e);
  return p.finish();
}

CandidateReport run_pipeline(const std::vector<PdnsEntry>& entries, const FilterConfig& config,
                             const Classifier* classifier) {
  Pipeline p(config, classifier);
  for (const auto& e : entries) p.consume(e);
  return p.finish();
}

namespace {

template <typename Pred>
std::vector<PdnsEntry> keep_if(const std::vector<PdnsEntry>& in, Pred pred) {
  std::vector<PdnsEntry> out;
  for (const auto& e : in) {
    if (pred(e)) out.push_back(e);
  }
  return out;
}

}  // namespace

std::vector<PdnsEntry> prefilter_rrtype(const std::vector<PdnsEntry>& in, const std::set<RRType>& types) {
  return keep_if(in, [&](const PdnsEntry& e) { return pass_rrtype(e, types); });
}

std::vector<PdnsEntry> filter_known_domains(const std::vector<PdnsEntry>& in, const KnownLists& lists,
                                            std::map<std::string, std::uint64_t>* dropped_known) {
  return keep_if(in, [&](const PdnsEntry& e) {
    const Fqdn sld = second_level_domain(e).sld;
    if (pass_known_domains(sld, lists)) return true;
    if (dropped_known && lists.known_tunnel_domains.contains(sld.dotted())) ++(*dropped_known)[sld.dotted()];
    return false;
  });
}

std::vector<PdnsEntry> filter_min_level(const std::vector<PdnsEntry>& in, std::size_t min_level) {
  return keep_if(in, [&](const PdnsEntry& e) { return pass_min_level(e, min_level); });
}

std::vector<PdnsEntry> filter_special_use(const std::vector<PdnsEntry>& in, const SpecialUseRules& rules) {
  return keep_if(in, [&](const PdnsEntry& e) { return !is_special_use(e, rules); });
}

std::vector<PdnsEntry> filter_min_subdomains(const std::vector<PdnsEntry>& in, std::size_t min_distinct,
                                             std::set<std::string>* kept_slds) {
  std::unordered_map<std::string, std::unordered_set<std::string>> names;
  for (const auto& e : in) names[second_level_domain(e).sld.dotted()].insert(e.rrname.dotted());
  std::set<std::string> keep;
  for (const auto& [sld, set] : names) {
    if (set.size() >= min_distinct) keep.insert(sld);
  }
  if (kept_slds) *kept_slds = keep;
  return keep_if(in, [&](const PdnsEntry& e) { return keep.count(second_level_domain(e).sld.dotted()) > 0; });
}

}  // namespace pdnsa
