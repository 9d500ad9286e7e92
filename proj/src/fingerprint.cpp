#include "pdnsa/fingerprint.hpp"

#include <algorithm>

#include "pdnsa/error.hpp"

namespace pdnsa {

std::string_view to_string(Encoding e) {
  switch (e) {
    case Encoding::Hex: return "hex";
    case Encoding::Base32: return "base32";
    case Encoding::Base64Like: return "base64";
    case Encoding::None: return "none";
  }
  return "none";
}

std::string_view to_string(CharClass c) {
  switch (c) {
    case CharClass::Digit: return "digit";
    case CharClass::Letter: return "letter";
    case CharClass::Other: return "other";
  }
  return "other";
}

std::optional<Encoding> parse_encoding(std::string_view s) {
  if (s == "hex") return Encoding::Hex;
  if (s == "base32") return Encoding::Base32;
  if (s == "base64" || s == "base64-like") return Encoding::Base64Like;
  if (s == "none") return Encoding::None;
  return std::nullopt;
}

std::optional<CharClass> parse_char_class(std::string_view s) {
  if (s == "digit") return CharClass::Digit;
  if (s == "letter") return CharClass::Letter;
  if (s == "other") return CharClass::Other;
  return std::nullopt;
}

CharClass char_class(unsigned char c) {
  if (c >= '0' && c <= '9') return CharClass::Digit;
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return CharClass::Letter;
  return CharClass::Other;
}

Encoding detect_encoding(std::string_view text, double ratio) {
  std::size_t alnum = 0, digits = 0, lower = 0, upper = 0, hex = 0, b32 = 0, specials = 0;
  bool b64_charset = true;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    const bool is_digit = c >= '0' && c <= '9';
    const bool is_lower = c >= 'a' && c <= 'z';
    const bool is_upper = c >= 'A' && c <= 'Z';
    if (is_digit || is_lower || is_upper) {
      ++alnum;
      digits += is_digit;
      lower += is_lower;
      upper += is_upper;
      const unsigned char f = is_upper ? static_cast<unsigned char>(c + 32) : c;
      hex += is_digit || (f >= 'a' && f <= 'f');
      b32 += (f >= 'a' && f <= 'z') || (f >= '2' && f <= '7');
    } else if (c == '-' || c == '_' || c == '+' || c == '/') {
      ++specials;
    } else if (c != '=') {
      b64_charset = false;
    }
  }
  if (alnum == 0) return Encoding::None;
  const bool letters = lower + upper > 0;
  const bool mixed = letters && digits > 0;
  const double n = static_cast<double>(alnum);
  if (mixed && static_cast<double>(hex) >= ratio * n) return Encoding::Hex;
  if (mixed && static_cast<double>(b32) >= ratio * n) return Encoding::Base32;
  if (b64_charset && mixed && ((lower > 0 && upper > 0) || specials >= 2)) return Encoding::Base64Like;
  return Encoding::None;
}

AttributeVector extract_attributes(const PdnsEntry& entry, const std::vector<std::string>& markers,
                                   double encoding_ratio) {
  AttributeVector a;
  const Fqdn& name = entry.rrname;
  a.a2_level = name.level();
  a.a3_len_l4 = label_length(name, 4);
  a.a4_len_l5 = label_length(name, 5);
  a.a5_rrtype = entry.rrtype;

  // Case-preserving view with the same label layout as the normalized name.
  std::string_view raw = name.dotted();
  if (name.raw().size() >= raw.size()) raw = std::string_view(name.raw()).substr(0, raw.size());

  if (a.a2_level >= 4) {
    // Everything left of the third-level label.
    std::size_t cut = raw.size();
    for (std::size_t dots = 0; cut > 0;) {
      if (raw[--cut] == '.' && ++dots == 3) break;
    }
    a.a1_payload_length = cut;
    std::string data;
    data.reserve(cut);
    for (std::size_t i = 0; i < cut; ++i) {
      if (raw[i] != '.') data.push_back(raw[i]);
    }
    a.a6_encoding = detect_encoding(data, encoding_ratio);
  }
  a.a7_leading = raw.empty() ? CharClass::Other : char_class(static_cast<unsigned char>(raw[0]));

  if (!markers.empty()) {
    std::string haystack;
    haystack.reserve(name.dotted().size() + 2);
    haystack.push_back('.');
    haystack.append(name.dotted());
    haystack.push_back('.');
    for (const auto& m : markers) {
      if (haystack.find(m) != std::string::npos) a.a8_markers.push_back(m);
    }
    std::sort(a.a8_markers.begin(), a.a8_markers.end());
  }
  return a;
}

bool ImplementationProfile::provider_matches(const Fqdn& sld) const {
  if (!provider_sld) return false;
  const std::string& pat = *provider_sld;
  const std::string& s = sld.dotted();
  if (pat.size() != s.size()) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (pat[i] == '?') {
      const char c = s[i];
      if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))) return false;
    } else if (pat[i] != s[i]) {
      return false;
    }
  }
  if (provider_min_digits > 0) {
    const std::string_view first = sld.label(0);
    const auto digits = std::count_if(first.begin(), first.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (static_cast<std::size_t>(digits) < provider_min_digits) return false;
  }
  return true;
}

Attribution match_profile(const AttributeVector& attrs, const ImplementationProfile& p,
                          const std::vector<std::string>& vocabulary) {
  Attribution out;
  auto& m = out.per_attribute;
  m[0] = p.payload_length.contains(attrs.a1_payload_length);
  m[1] = p.level.contains(attrs.a2_level);
  m[2] = attrs.a3_len_l4 && p.len_l4.contains(*attrs.a3_len_l4);
  m[3] = attrs.a4_len_l5 && p.len_l5.contains(*attrs.a4_len_l5);
  m[4] = p.rrtypes.count(attrs.a5_rrtype) > 0;
  m[5] = p.encodings.count(attrs.a6_encoding) > 0;
  m[6] = p.leading.count(attrs.a7_leading) > 0;
  if (p.markers.empty()) {
    // Marker-free profiles match names that carry no other profile's marker.
    bool foreign = false;
    for (const auto& found : attrs.a8_markers) {
      foreign = foreign || std::find(vocabulary.begin(), vocabulary.end(), found) != vocabulary.end();
    }
    m[7] = !foreign;
  } else {
    m[7] = std::all_of(p.markers.begin(), p.markers.end(), [&](const std::string& mk) {
      return std::binary_search(attrs.a8_markers.begin(), attrs.a8_markers.end(), mk);
    });
  }
  out.match_count = static_cast<std::size_t>(std::count(m.begin(), m.end(), true));
  out.implementation = p.name;
  return out;
}

Classifier::Classifier(ProfileSet profiles, ClassifierOptions options)
    : profiles_(std::move(profiles)), options_(options) {
  if (profiles_.empty()) throw ConfigError("classifier needs at least one profile");
  if (options_.threshold > kAttributeCount) throw ConfigError("match threshold above 8");
  if (!(options_.encoding_ratio > 0.0 && options_.encoding_ratio <= 1.0)) {
    throw ConfigError("encoding ratio must be in (0, 1]");
  }
}

Attribution Classifier::classify_attributes(const AttributeVector& attrs) const {
  Attribution best;
  bool have = false;
  for (const auto& p : profiles_.profiles()) {
    Attribution a = match_profile(attrs, p, profiles_.marker_vocabulary());
    if (!have || a.match_count > best.match_count) {
      best = std::move(a);
      best.tied = {best.implementation};
      have = true;
    } else if (a.match_count == best.match_count) {
      best.tied.push_back(a.implementation);
    }
  }
  if (best.match_count < options_.threshold) {
    best.implementation = std::string(kUnknown);
    best.tied.clear();
  }
  return best;
}

Attribution Classifier::classify(const PdnsEntry& entry, const Fqdn& sld) const {
  const AttributeVector attrs =
      extract_attributes(entry, profiles_.marker_vocabulary(), options_.encoding_ratio);
  for (const auto& p : profiles_.profiles()) {
    if (p.provider_matches(sld)) {
      Attribution a = match_profile(attrs, p, profiles_.marker_vocabulary());
      a.via_provider_rule = true;
      a.tied = {p.name};
      return a;
    }
  }
  return classify_attributes(attrs);
}

Attribution Classifier::classify(const PdnsEntry& entry) const {
  return classify(entry, second_level_domain(entry).sld);
}

void SldVote::add(const Attribution& a) {
  ++entries_;
  if (a.known()) {
    ++votes_[a.implementation];
  } else {
    ++unknown_;
  }
}

void SldVote::merge(const SldVote& o) {
  entries_ += o.entries_;
  unknown_ += o.unknown_;
  for (const auto& [k, v] : o.votes_) votes_[k] += v;
}

SldAttribution SldVote::result(const std::vector<std::string>& order) const {
  SldAttribution out;
  out.entries = entries_;
  out.unknown = unknown_;
  std::uint64_t top = 0;
  for (const auto& [_, v] : votes_) top = std::max(top, v);
  if (top == 0) return out;
  for (const auto& name : order) {
    auto it = votes_.find(name);
    if (it != votes_.end() && it->second == top) out.tied.push_back(name);
  }
  // Names outside `order` go last, alphabetically.
  for (const auto& [name, v] : votes_) {
    if (v == top && std::find(order.begin(), order.end(), name) == order.end()) out.tied.push_back(name);
  }
  out.implementation = out.tied.front();
  out.fraction = static_cast<double>(top) / static_cast<double>(entries_);
  return out;
}

SldAttribution attribute_sld(const std::vector<PdnsEntry>& entries, const Classifier& classifier) {
  SldVote vote;
  for (const auto& e : entries) vote.add(classifier.classify(e));
  std::vector<std::string> order;
  for (const auto& p : classifier.profiles().profiles()) order.push_back(p.name);
  return vote.result(order);
}

void ConfusionMatrix::add(const std::string& truth, const std::string& predicted, std::uint64_t n) {
  cells_[{truth, predicted}] += n;
  total_ += n;
}

void ConfusionMatrix::merge(const ConfusionMatrix& o) {
  for (const auto& [k, v] : o.cells_) cells_[k] += v;
  total_ += o.total_;
}

std::uint64_t ConfusionMatrix::correct() const {
  std::uint64_t n = 0;
  for (const auto& [k, v] : cells_) {
    if (k.first == k.second) n += v;
  }
  return n;
}

double ConfusionMatrix::accuracy() const {
  return total_ == 0 ? 0.0 : static_cast<double>(correct()) / static_cast<double>(total_);
}

std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> ConfusionMatrix::per_class() const {
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> out;
  for (const auto& [k, v] : cells_) {
    auto& row = out[k.first];
    row.second += v;
    if (k.first == k.second) row.first += v;
  }
  return out;
}

std::string ConfusionMatrix::to_csv() const {
  std::string out = "truth,predicted,count\n";
  for (const auto& [k, v] : cells_) out += k.first + ',' + k.second + ',' + std::to_string(v) + '\n';
  return out;
}

namespace {

void widen(std::optional<Range>& r, std::size_t v) {
  if (!r) {
    r = Range{v, v};
  } else {
    r->lo = std::min(r->lo, v);
    r->hi = std::max(r->hi, v);
  }
}

template <typename K>
std::set<K> frequent(const std::map<K, std::uint64_t>& counts, std::uint64_t n, double min_share) {
  std::set<K> out;
  for (const auto& [k, c] : counts) {
    if (static_cast<double>(c) >= min_share * static_cast<double>(n)) out.insert(k);
  }
  return out;
}

}  // namespace

void ProfileBuilder::add(const AttributeVector& a) {
  ++n_;
  if (a.a2_level >= 4) widen(a1_, a.a1_payload_length);
  widen(a2_, a.a2_level);
  if (a.a3_len_l4) widen(a3_, *a.a3_len_l4);
  if (a.a4_len_l5) widen(a4_, *a.a4_len_l5);
  ++types_[a.a5_rrtype];
  ++encodings_[a.a6_encoding];
  ++leading_[a.a7_leading];
}

ImplementationProfile ProfileBuilder::build(const std::vector<std::string>& markers, double min_share) const {
  if (n_ == 0) throw ConfigError("no samples for profile " + name_);
  ImplementationProfile p;
  p.name = name_;
  // A range never observed stays at [0,0]; present label lengths are >= 1,
  // so it can only match a payload length of 0.
  p.payload_length = a1_.value_or(Range{0, 0});
  p.level = a2_.value_or(Range{0, 0});
  p.len_l4 = a3_.value_or(Range{0, 0});
  p.len_l5 = a4_.value_or(Range{0, 0});
  p.rrtypes = frequent(types_, n_, min_share);
  p.encodings = frequent(encodings_, n_, min_share);
  p.leading = frequent(leading_, n_, min_share);
  p.markers = markers;
  std::sort(p.markers.begin(), p.markers.end());
  return p;
}

}  // namespace pdnsa
